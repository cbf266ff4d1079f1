#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace textsnake {

struct BenchReport {
    std::string name;
    std::size_t pixels = 0;
    std::size_t instances = 0;
    double median_seconds = 0.0;
    double pixels_per_second = 0.0;
    std::uint64_t checksum = 0;
};

/// Known cases: "rasterize-1024", "segment-1024", "trace-512"; suite "all"
/// runs every case. Inputs are rebuilt from fixed seeds and each case checks
/// its result checksum against a frozen value before any timing. A warm-up
/// run is excluded; the median of `reps` (>= 5) wall-clock runs is reported.
std::vector<BenchReport> run_bench(const std::string& suite, int reps);

std::string bench_report_json(const std::vector<BenchReport>& reports);
std::string bench_report_table(const std::vector<BenchReport>& reports);

/// Deterministic inputs used by the cases, exposed so the functional test
/// suite can pin the same checksums.
namespace bench_detail {
std::uint64_t fnv1a(const void* data, std::size_t bytes, std::uint64_t seed = 1469598103934665603ull);
std::uint64_t rasterize_case_checksum();
std::uint64_t segment_case_checksum();
std::uint64_t trace_case_checksum();
}  // namespace bench_detail

}  // namespace textsnake
