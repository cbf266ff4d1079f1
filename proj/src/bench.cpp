#include "textsnake/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "textsnake/errors.hpp"
#include "textsnake/geometry.hpp"
#include "textsnake/pipeline.hpp"
#include "textsnake/postproc.hpp"
#include "textsnake/synth.hpp"

namespace textsnake {

namespace bench_detail {

std::uint64_t fnv1a(const void* data, std::size_t bytes, std::uint64_t seed) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < bytes; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

std::uint64_t mask_checksum(const PixelMask& mask) {
    return fnv1a(mask.words().data(), mask.words().size() * sizeof(std::uint64_t));
}

// A fixed 24-gon flower spanning most of a 1024x1024 grid.
Polygon rasterize_case_polygon() {
    std::vector<Point2> pts;
    for (int i = 0; i < 24; ++i) {
        const double a = 2.0 * std::numbers::pi * i / 24;
        const double r = 460.0 + 40.0 * std::cos(5.0 * a);
        pts.emplace_back(512.0 + r * std::cos(a), 512.0 + r * std::sin(a));
    }
    return Polygon(std::move(pts));
}

// Seeded half-density noise mask; the worst case for union-find merging.
PixelMask segment_case_mask() {
    PixelMask mask(1024, 1024);
    std::mt19937_64 eng(0x5eedu);
    for (int row = 0; row < 1024; ++row)
        for (int col = 0; col < 1024; col += 64) {
            std::uint64_t bits = eng();
            for (int k = 0; k < 64; ++k)
                if ((bits >> k) & 1u) mask.set(row, col + k);
        }
    return mask;
}

// Ground-truth maps of four synthetic snakes on a 512x512 grid.
GeometryMaps trace_case_maps() {
    SynthParams params;
    params.seed = 7;
    params.count_min = 4;
    params.count_max = 4;
    const SynthResult synth = synth_snakes(params, 1);
    return generate_labels(synth.records[0]).maps;
}

}  // namespace

std::uint64_t rasterize_case_checksum() {
    return mask_checksum(rasterize_polygon(rasterize_case_polygon(), 1024, 1024));
}

std::uint64_t segment_case_checksum() {
    const std::vector<TclComponent> comps = segment_instances(segment_case_mask());
    std::uint64_t h = fnv1a(nullptr, 0);
    for (const TclComponent& c : comps) {
        const std::uint64_t size = c.pixels.size();
        h = fnv1a(&size, sizeof(size), h);
    }
    return h;
}

std::uint64_t trace_case_checksum() {
    const GeometryMaps maps = trace_case_maps();
    const std::vector<Detection> dets = detect(maps);
    std::uint64_t h = fnv1a(nullptr, 0);
    for (const Detection& det : dets) {
        const std::uint64_t count = det.region.count();
        h = fnv1a(&count, sizeof(count), h);
    }
    return h;
}

}  // namespace bench_detail

namespace {

struct BenchCase {
    std::string name;
    std::size_t pixels;
    std::size_t instances;
    // Returns the checksum of its result; input setup happens outside timing.
    std::function<std::uint64_t()> body;
    std::uint64_t expected;
};

// Frozen from the functional test suite; the tests assert the same values.
constexpr std::uint64_t kRasterizeChecksum = 0xd2aad0784e9bf483ull;
constexpr std::uint64_t kSegmentChecksum = 0xc6967ab0a1eb1e30ull;
constexpr std::uint64_t kTraceChecksum = 0x097254797a412204ull;

std::vector<BenchCase> build_cases(const std::string& suite) {
    std::vector<BenchCase> cases;
    const bool all = suite == "all";

    if (all || suite == "rasterize-1024")
        cases.push_back({"rasterize-1024", 1024 * 1024, 1,
                         [] { return bench_detail::rasterize_case_checksum(); },
                         kRasterizeChecksum});
    if (all || suite == "segment-1024")
        cases.push_back({"segment-1024", 1024 * 1024, 1,
                         [] { return bench_detail::segment_case_checksum(); },
                         kSegmentChecksum});
    if (all || suite == "trace-512")
        cases.push_back({"trace-512", 512 * 512, 4,
                         [] { return bench_detail::trace_case_checksum(); },
                         kTraceChecksum});

    if (cases.empty()) throw UnknownCase("unknown bench suite: " + suite);
    return cases;
}

}  // namespace

std::vector<BenchReport> run_bench(const std::string& suite, int reps) {
    if (reps < 5) throw InvalidArgument("bench: at least 5 repetitions required");

    std::vector<BenchReport> reports;
    for (const BenchCase& c : build_cases(suite)) {
        // Warm-up run doubles as the checksum gate.
        const std::uint64_t checksum = c.body();
        if (checksum != c.expected) {
            std::ostringstream msg;
            msg << "bench case " << c.name << ": result checksum " << std::hex << checksum
                << " does not match frozen value " << c.expected;
            throw Error(msg.str());
        }

        std::vector<double> times(static_cast<std::size_t>(reps));
        for (int i = 0; i < reps; ++i) {
            const auto start = std::chrono::steady_clock::now();
            const std::uint64_t again = c.body();
            const auto stop = std::chrono::steady_clock::now();
            if (again != c.expected) throw Error("bench case " + c.name + ": nondeterministic result");
            times[static_cast<std::size_t>(i)] =
                std::chrono::duration<double>(stop - start).count();
        }
        std::sort(times.begin(), times.end());
        const double median = times.size() % 2 == 1
                                  ? times[times.size() / 2]
                                  : 0.5 * (times[times.size() / 2 - 1] + times[times.size() / 2]);

        BenchReport rep;
        rep.name = c.name;
        rep.pixels = c.pixels;
        rep.instances = c.instances;
        rep.median_seconds = median;
        rep.pixels_per_second = median > 0.0 ? static_cast<double>(c.pixels) / median : 0.0;
        rep.checksum = checksum;
        reports.push_back(std::move(rep));
    }
    return reports;
}

std::string bench_report_json(const std::vector<BenchReport>& reports) {
    using nlohmann::json;
    json arr = json::array();
    for (const BenchReport& r : reports) {
        json j;
        j["case"] = r.name;
        j["pixels"] = r.pixels;
        j["instances"] = r.instances;
        j["median_seconds"] = r.median_seconds;
        j["pixels_per_second"] = r.pixels_per_second;
        std::ostringstream hex;
        hex << std::hex << r.checksum;
        j["checksum"] = hex.str();
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

std::string bench_report_table(const std::vector<BenchReport>& reports) {
    std::ostringstream out;
    out << "case             pixels     inst   median_s     px/s\n";
    for (const BenchReport& r : reports) {
        char line[160];
        std::snprintf(line, sizeof(line), "%-16s %-10zu %-6zu %-12.6f %.3e\n", r.name.c_str(),
                      r.pixels, r.instances, r.median_seconds, r.pixels_per_second);
        out << line;
    }
    return out.str();
}

}  // namespace textsnake
