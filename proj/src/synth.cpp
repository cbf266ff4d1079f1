#include "textsnake/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <json.hpp>

namespace textsnake {

namespace {

constexpr double kAxisStep = 2.0;       // px between axis samples
constexpr double kBoundaryStep = 6.0;   // px between polygon vertices per sideline
constexpr double kMaxNetTurn = 4.2;     // rad, keeps snakes from closing on themselves
constexpr int kMaxAttempts = 1000;

class Rand {
public:
    explicit Rand(std::uint64_t seed) : eng_(seed) {}

    double uniform() {  // [0, 1)
        return static_cast<double>(eng_() >> 11) * (1.0 / 9007199254740992.0);
    }
    double range(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int range_int(int lo, int hi) {  // inclusive
        const int span = hi - lo + 1;
        return lo + std::min(span - 1, static_cast<int>(uniform() * span));
    }

private:
    std::mt19937_64 eng_;
};

struct Tube {
    std::vector<Point2> axis;       // dense, kAxisStep spacing
    std::vector<double> radii;      // per axis point
    std::vector<double> headings;   // per axis point
    Polygon polygon;
};

double seg_point_dist(const Point2& a, const Point2& b, const Point2& p) {
    const Point2 ab = b - a;
    const double len2 = ab.dot(ab);
    if (len2 == 0.0) return distance(a, p);
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return distance(a + ab * t, p);
}

double seg_seg_dist(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
    auto orient = [](const Point2& p, const Point2& q, const Point2& r) {
        return (q - p).cross(r - p);
    };
    const double o1 = orient(a, b, c), o2 = orient(a, b, d);
    const double o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0))) return 0.0;  // proper crossing
    return std::min(std::min(seg_point_dist(a, b, c), seg_point_dist(a, b, d)),
                    std::min(seg_point_dist(c, d, a), seg_point_dist(c, d, b)));
}

bool segments_properly_intersect(const Point2& a, const Point2& b, const Point2& c,
                                 const Point2& d) {
    auto orient = [](const Point2& p, const Point2& q, const Point2& r) {
        return (q - p).cross(r - p);
    };
    const double o1 = orient(a, b, c), o2 = orient(a, b, d);
    const double o3 = orient(c, d, a), o4 = orient(c, d, b);
    return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0));
}

bool polygon_is_simple(const Polygon& poly) {
    const auto& v = poly.vertices();
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            // Skip edges sharing a vertex (consecutive, including the wrap).
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            if (segments_properly_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]))
                return false;
        }
    }
    return true;
}

double polygon_distance(const Polygon& a, const Polygon& b) {
    double best = std::numeric_limits<double>::max();
    const auto& va = a.vertices();
    const auto& vb = b.vertices();
    for (std::size_t i = 0; i < va.size(); ++i)
        for (std::size_t j = 0; j < vb.size(); ++j)
            best = std::min(best, seg_seg_dist(va[i], va[(i + 1) % va.size()], vb[j],
                                               vb[(j + 1) % vb.size()]));
    return best;
}

Tube make_tube(Rand& rng, const SynthParams& p) {
    const double length = rng.range(p.length_min, p.length_max);
    double k0 = rng.range(-p.curvature_max, p.curvature_max);
    if (std::abs(k0) * length > kMaxNetTurn)
        k0 = (k0 < 0 ? -1.0 : 1.0) * kMaxNetTurn / length;
    const double k1 = rng.range(0.0, p.curvature_max / 2.0);
    const double k_phase = rng.range(0.0, 2.0 * std::numbers::pi);

    const double r_a = rng.range(p.radius_min, p.radius_max);
    const double r_b = rng.range(p.radius_min, p.radius_max);
    const double r_amp = rng.range(0.0, (p.radius_max - p.radius_min) / 4.0);
    const double r_phase = rng.range(0.0, 2.0 * std::numbers::pi);

    const double heading0 = rng.range(0.0, 2.0 * std::numbers::pi);

    Tube tube;
    const int steps = std::max(2, static_cast<int>(std::lround(length / kAxisStep)));
    double heading = heading0;
    Point2 pos{0.0, 0.0};
    for (int i = 0; i <= steps; ++i) {
        const double s = length * i / steps;
        const double u = s / length;
        double r = r_a + (r_b - r_a) * u + r_amp * std::sin(2.0 * std::numbers::pi * u + r_phase);
        r = std::clamp(r, p.radius_min, p.radius_max);
        tube.axis.push_back(pos);
        tube.radii.push_back(r);
        tube.headings.push_back(heading);
        if (i < steps) {
            const double ds = length / steps;
            const double k = std::clamp(k0 + k1 * std::sin(2.0 * std::numbers::pi * u + k_phase),
                                        -p.curvature_max, p.curvature_max);
            heading += k * ds;
            pos = pos + Point2{std::cos(heading), std::sin(heading)} * ds;
        }
    }
    return tube;
}

void polygonize(Tube& tube) {
    // Boundary vertices every kBoundaryStep along the axis, ends included.
    std::vector<std::size_t> picks;
    const std::size_t stride = std::max<std::size_t>(1, std::llround(kBoundaryStep / kAxisStep));
    for (std::size_t i = 0; i < tube.axis.size(); i += stride) picks.push_back(i);
    if (picks.back() != tube.axis.size() - 1) picks.push_back(tube.axis.size() - 1);

    std::vector<Point2> side_a, side_b;
    for (std::size_t i : picks) {
        const double h = tube.headings[i];
        const Point2 normal{-std::sin(h), std::cos(h)};
        side_a.push_back(tube.axis[i] + normal * tube.radii[i]);
        side_b.push_back(tube.axis[i] - normal * tube.radii[i]);
    }
    std::vector<Point2> verts = side_a;
    verts.insert(verts.end(), side_b.rbegin(), side_b.rend());
    tube.polygon = Polygon(std::move(verts));
}

void translate_tube(Tube& tube, const Point2& offset) {
    for (Point2& p : tube.axis) p = p + offset;
    std::vector<Point2> verts = tube.polygon.vertices();
    for (Point2& p : verts) p = p + offset;
    tube.polygon = Polygon(std::move(verts));
}

}  // namespace

SynthResult synth_snakes(const SynthParams& params, int n_images) {
    if (params.count_min < 0 || params.count_max < params.count_min)
        throw InvalidArgument("synth: bad instance count range");
    if (params.min_separation < 4.0)
        throw InvalidArgument("synth: min separation must be >= 4 px");
    if (params.radius_min <= 0.0 || params.radius_max < params.radius_min)
        throw InvalidArgument("synth: bad radius range");
    if (params.length_min <= 0.0 || params.length_max < params.length_min)
        throw InvalidArgument("synth: bad length range");

    Rand rng(params.seed);
    SynthResult result;

    const double margin = 2.0;
    for (int img = 0; img < n_images; ++img) {
        AnnotationRecord record;
        char name[32];
        std::snprintf(name, sizeof(name), "synth-%04d", img);
        record.image_id = name;
        record.height = params.image_size;
        record.width = params.image_size;

        std::vector<SynthOracleInstance> oracle;
        std::vector<Polygon> placed;

        const int count = rng.range_int(params.count_min, params.count_max);
        int failures = 0;
        while (static_cast<int>(placed.size()) < count) {
            if (failures >= kMaxAttempts)
                throw GenerationFailure("synth: could not place instance after " +
                                        std::to_string(kMaxAttempts) + " attempts");
            Tube tube = make_tube(rng, params);
            polygonize(tube);

            double min_x = std::numeric_limits<double>::max(), max_x = std::numeric_limits<double>::lowest();
            double min_y = min_x, max_y = max_x;
            for (const Point2& p : tube.polygon.vertices()) {
                min_x = std::min(min_x, p.x);
                max_x = std::max(max_x, p.x);
                min_y = std::min(min_y, p.y);
                max_y = std::max(max_y, p.y);
            }
            const double bw = max_x - min_x;
            const double bh = max_y - min_y;
            const double free_w = params.image_size - 2 * margin - bw;
            const double free_h = params.image_size - 2 * margin - bh;
            if (free_w < 0.0 || free_h < 0.0) {
                ++failures;
                continue;
            }
            const Point2 offset{margin - min_x + rng.range(0.0, free_w),
                                margin - min_y + rng.range(0.0, free_h)};
            translate_tube(tube, offset);

            if (!polygon_is_simple(tube.polygon)) {
                ++failures;
                continue;
            }
            bool clear = true;
            for (const Polygon& other : placed)
                if (polygon_distance(tube.polygon, other) < params.min_separation ||
                    point_in_polygon(other, tube.polygon[0]) ||
                    point_in_polygon(tube.polygon, other[0])) {
                    clear = false;
                    break;
                }
            if (!clear) {
                ++failures;
                continue;
            }

            failures = 0;
            placed.push_back(tube.polygon);
            AnnotatedInstance inst;
            inst.polygon = tube.polygon;
            record.instances.push_back(std::move(inst));
            oracle.push_back({std::move(tube.axis), std::move(tube.radii)});
        }

        result.records.push_back(std::move(record));
        result.oracles.push_back(std::move(oracle));
    }
    return result;
}

std::string write_oracle(const SynthResult& result) {
    using nlohmann::json;
    std::string out;
    for (std::size_t i = 0; i < result.records.size(); ++i) {
        json obj;
        obj["image"] = result.records[i].image_id;
        json insts = json::array();
        for (const SynthOracleInstance& inst : result.oracles[i]) {
            json axis = json::array();
            for (const Point2& p : inst.axis) axis.push_back(json::array({p.x, p.y}));
            json j;
            j["axis"] = std::move(axis);
            j["radius"] = inst.radii;
            insts.push_back(std::move(j));
        }
        obj["instances"] = std::move(insts);
        out += obj.dump();
        out += '\n';
    }
    return out;
}

}  // namespace textsnake
