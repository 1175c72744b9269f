#pragma once

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <ctime>
#include <mutex>
#include <thread>

#include <unistd.h>

namespace esgbench::bench {

/// CPU time consumed by the whole process so far, in seconds.
inline double process_cpu_seconds()
{
    timespec ts{};
    if (clock_gettime(CLOCK_PROCESS_CPUTIME_ID, &ts) != 0) {
        return 0.0;
    }
    return static_cast<double>(ts.tv_sec) + static_cast<double>(ts.tv_nsec) * 1e-9;
}

/// Resident set size in MiB, or 0 where /proc is unavailable.
inline double resident_mb()
{
    std::FILE* f = std::fopen("/proc/self/statm", "r");
    if (!f) {
        return 0.0;
    }
    long size = 0, resident = 0;
    const int n = std::fscanf(f, "%ld %ld", &size, &resident);
    std::fclose(f);
    if (n != 2) {
        return 0.0;
    }
    return static_cast<double>(resident) * static_cast<double>(sysconf(_SC_PAGESIZE)) / (1024.0 * 1024.0);
}

inline unsigned core_count()
{
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

struct ResourceUsage {
    double cpu_max_pct = 0.0;
    double cpu_avg_pct = 0.0;
    double peak_mem_mb = 0.0;
};

/// Polls process CPU and RSS on a background thread while a measured window
/// is open. Percentages are of total machine capacity (100% = every core
/// busy), as a task manager reports them.
class ResourceSampler {
  public:
    explicit ResourceSampler(std::chrono::milliseconds interval) : interval_(interval <= std::chrono::milliseconds{0} ? std::chrono::milliseconds{1} : interval) {}

    ResourceSampler(const ResourceSampler&) = delete;
    ResourceSampler& operator=(const ResourceSampler&) = delete;

    ~ResourceSampler()
    {
        if (thread_.joinable()) {
            halt();
        }
    }

    void start()
    {
        if (thread_.joinable()) {
            halt();
        }
        usage_ = {};
        usage_.peak_mem_mb = resident_mb();
        stop_ = false;
        start_wall_ = last_wall_ = Clock::now();
        start_cpu_ = last_cpu_ = process_cpu_seconds();
        thread_ = std::thread([this] { poll(); });
    }

    ResourceUsage stop()
    {
        halt();
        const double wall = seconds(Clock::now() - start_wall_);
        const double cpu = process_cpu_seconds() - start_cpu_;
        usage_.cpu_avg_pct = wall > 0 ? std::max(0.0, cpu / wall / core_count() * 100.0) : 0.0;
        usage_.cpu_max_pct = std::max(usage_.cpu_max_pct, usage_.cpu_avg_pct);
        usage_.peak_mem_mb = std::max(usage_.peak_mem_mb, resident_mb());
        return usage_;
    }

  private:
    using Clock = std::chrono::steady_clock;

    static double seconds(Clock::duration d) { return std::chrono::duration<double>(d).count(); }

    void halt()
    {
        {
            std::lock_guard lk(mu_);
            stop_ = true;
        }
        cv_.notify_all();
        thread_.join();
    }

    void poll()
    {
        std::unique_lock lk(mu_);
        while (!cv_.wait_for(lk, interval_, [this] { return stop_; })) {
            const auto now = Clock::now();
            const double cpu = process_cpu_seconds();
            const double dt = seconds(now - last_wall_);
            if (dt > 0) {
                usage_.cpu_max_pct = std::max(usage_.cpu_max_pct, (cpu - last_cpu_) / dt / core_count() * 100.0);
            }
            usage_.peak_mem_mb = std::max(usage_.peak_mem_mb, resident_mb());
            last_wall_ = now;
            last_cpu_ = cpu;
        }
    }

    std::chrono::milliseconds interval_;
    std::thread thread_;
    std::mutex mu_;
    std::condition_variable cv_;
    bool stop_ = false;
    ResourceUsage usage_;
    Clock::time_point start_wall_, last_wall_;
    double start_cpu_ = 0.0, last_cpu_ = 0.0;
};

}  // namespace esgbench::bench
