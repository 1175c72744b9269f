#pragma once

#include "esgbench/bench/harness.hpp"
#include "esgbench/bench/report.hpp"
#include "esgbench/bench/sampler.hpp"
#include "esgbench/core/error.hpp"
#include "esgbench/core/model.hpp"
#include "esgbench/core/order.hpp"
#include "esgbench/core/validate.hpp"
#include "esgbench/document/engine.hpp"
#include "esgbench/graph/engine.hpp"
#include "esgbench/ingest/dataset_io.hpp"
#include "esgbench/ingest/generator.hpp"
#include "esgbench/ingest/loaders.hpp"
#include "esgbench/relational/engine.hpp"
#include "esgbench/text/index_io.hpp"
#include "esgbench/text/scoring.hpp"
#include "esgbench/workload/equivalence.hpp"
#include "esgbench/workload/workload.hpp"

namespace esgbench {

inline AnyEngine load_engine(EngineKind kind, const ValidatedDataset& data, std::size_t shards = 1)
{
    switch (kind) {
        case EngineKind::Relational:
            return AnyEngine(relational::RelationalEngine::load(data));
        case EngineKind::Document:
            return AnyEngine(document::DocumentEngine::load(data, shards));
        case EngineKind::Graph:
            return AnyEngine(graph::GraphEngine::load(data));
    }
    throw Error("unknown engine kind");
}

}  // namespace esgbench
