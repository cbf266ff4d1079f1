#include <algorithm>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "textsnake/annotations.hpp"
#include "textsnake/bench.hpp"
#include "textsnake/evalkit.hpp"
#include "textsnake/errors.hpp"
#include "textsnake/pipeline.hpp"
#include "textsnake/png_io.hpp"
#include "textsnake/postproc.hpp"
#include "textsnake/rectify.hpp"
#include "textsnake/render.hpp"
#include "textsnake/synth.hpp"

namespace fs = std::filesystem;
using namespace textsnake;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitInternal = 3;

std::string path_stem(const std::string& path) { return fs::path(path).stem().string(); }

std::vector<AnnotationRecord> load_annotations(const std::string& path) {
    std::vector<std::string> warnings;
    auto records = parse_polyjson(read_text_file(path), &warnings);
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
    return records;
}

int run_synth(const std::string& out, const std::string& oracle_out, int images,
              const SynthParams& params) {
    const SynthResult result = synth_snakes(params, images);
    write_text_file(out, write_annotations(result.records));
    if (!oracle_out.empty()) write_text_file(oracle_out, write_oracle(result));
    std::cerr << "synth: wrote " << result.records.size() << " image(s) to " << out << "\n";
    return kExitOk;
}

int run_gen_labels(const std::string& ann, const std::string& out_dir, const SnakeParams& sp) {
    const auto records = load_annotations(ann);
    fs::create_directories(out_dir);
    for (const AnnotationRecord& rec : records) {
        const LabelBundle bundle = generate_labels(rec, sp);
        for (const std::string& msg : bundle.skipped)
            std::cerr << "warning: " << rec.image_id << ": " << msg << "\n";
        save_maps(bundle.maps, (fs::path(out_dir) / (rec.image_id + ".tsm")).string());
    }
    std::cerr << "gen-labels: wrote " << records.size() << " map file(s) to " << out_dir << "\n";
    return kExitOk;
}

int run_reconstruct(const std::string& maps_dir, const std::string& out,
                    const PostprocParams& params) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(maps_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".tsm")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    std::vector<DetectionRecord> records;
    for (const fs::path& file : files) {
        const GeometryMaps maps = load_maps(file.string());
        DetectionRecord rec;
        rec.image_id = file.stem().string();
        rec.height = maps.height();
        rec.width = maps.width();
        rec.detections = detect(maps, params);
        records.push_back(std::move(rec));
    }
    write_text_file(out, write_detections(records));
    std::cerr << "reconstruct: wrote detections for " << records.size() << " image(s) to " << out
              << "\n";
    return kExitOk;
}

int run_roundtrip(const std::string& ann, const std::string& report_path, const SnakeParams& sp,
                  const PostprocParams& pp) {
    const auto records = load_annotations(ann);
    std::vector<RoundtripImage> per_image;
    per_image.reserve(records.size());
    for (const AnnotationRecord& rec : records)
        per_image.push_back(roundtrip_image(rec, sp, pp));
    const RoundtripSummary summary = summarize_roundtrip(std::move(per_image));
    write_text_file(report_path, roundtrip_report_json(summary));
    std::cerr << "roundtrip: " << summary.instances << " instance(s), mean IoU " << summary.mean_iou
              << "\n";
    return kExitOk;
}

int run_eval(const std::string& det_path, const std::string& gt_path, double iou,
             const std::string& report_path) {
    const auto gt_records = load_annotations(gt_path);
    const auto det_records = parse_detections(read_text_file(det_path));

    auto dets_for = [&](const std::string& id) -> const DetectionRecord* {
        for (const DetectionRecord& rec : det_records)
            if (rec.image_id == id) return &rec;
        return nullptr;
    };

    std::vector<ImageScore> scores;
    std::vector<std::string> image_ids;
    std::vector<bool> det_record_used(det_records.size(), false);
    for (const AnnotationRecord& gt : gt_records) {
        const DetectionRecord* dr = dets_for(gt.image_id);
        std::vector<Detection> dets;
        if (dr != nullptr) {
            dets = dr->detections;
            det_record_used[static_cast<std::size_t>(dr - det_records.data())] = true;
        }
        const auto [h, w] = std::pair{gt.height, gt.width};
        scores.push_back(match_and_score(dets, gt.instances, h, w, iou));
        image_ids.push_back(gt.image_id);
    }
    // Detections for images absent from the ground truth count as false
    // positives on their own image.
    for (std::size_t i = 0; i < det_records.size(); ++i) {
        if (det_record_used[i] || det_records[i].height <= 0) continue;
        scores.push_back(match_and_score(det_records[i].detections, {}, det_records[i].height,
                                         det_records[i].width, iou));
        image_ids.push_back(det_records[i].image_id);
    }

    const ScoreReport report = aggregate_scores(std::move(scores));

    using nlohmann::json;
    json j;
    j["precision"] = report.precision;
    j["recall"] = report.recall;
    j["f_measure"] = report.f_measure;
    j["tp"] = report.tp;
    j["fp"] = report.fp;
    j["fn"] = report.fn;
    json per_image = json::array();
    for (std::size_t i = 0; i < report.per_image.size(); ++i) {
        const ImageScore& s = report.per_image[i];
        json e;
        e["image"] = image_ids[i];
        e["precision"] = s.precision;
        e["recall"] = s.recall;
        e["f_measure"] = s.f_measure;
        e["tp"] = s.tp;
        e["fp"] = s.fp;
        e["fn"] = s.fn;
        per_image.push_back(std::move(e));
    }
    j["per_image"] = std::move(per_image);
    write_text_file(report_path, j.dump(2) + "\n");
    std::cout << "precision " << report.precision << " recall " << report.recall << " f_measure "
              << report.f_measure << "\n";
    return kExitOk;
}

int run_render(const std::string& image_path, const std::string& det_path,
               const std::string& gt_path, const std::string& out_path) {
    const RasterImage img = read_png(image_path);
    const std::string stem = path_stem(image_path);

    std::vector<Detection> dets;
    if (!det_path.empty())
        for (const DetectionRecord& rec : parse_detections(read_text_file(det_path)))
            if (rec.image_id == stem)
                dets.insert(dets.end(), rec.detections.begin(), rec.detections.end());

    std::vector<AnnotatedInstance> gts;
    if (!gt_path.empty())
        for (const AnnotationRecord& rec : load_annotations(gt_path))
            if (rec.image_id == stem)
                gts.insert(gts.end(), rec.instances.begin(), rec.instances.end());

    write_png(render_overlay(img, dets, gts), out_path);
    std::cerr << "render: " << dets.size() << " detection(s), " << gts.size() << " GT instance(s)\n";
    return kExitOk;
}

int run_rectify(const std::string& image_path, const std::string& det_path,
                const std::string& out_dir) {
    const RasterImage img = read_png(image_path);
    const std::string stem = path_stem(image_path);
    fs::create_directories(out_dir);

    std::size_t written = 0;
    for (const DetectionRecord& rec : parse_detections(read_text_file(det_path))) {
        if (rec.image_id != stem) continue;
        for (std::size_t i = 0; i < rec.detections.size(); ++i) {
            const SnakeDescriptor& snake = rec.detections[i].snake;
            if (snake.disks.size() < 2) {
                std::cerr << "warning: detection " << i << " has no usable snake, skipped\n";
                continue;
            }
            char name[64];
            std::snprintf(name, sizeof(name), "%s-%02zu.png", stem.c_str(), i);
            write_png(rectify_instance(img, snake), (fs::path(out_dir) / name).string());
            ++written;
        }
    }
    std::cerr << "rectify: wrote " << written << " strip(s) to " << out_dir << "\n";
    return kExitOk;
}

int run_bench_cmd(const std::string& suite, int reps, const std::string& out) {
    const std::vector<BenchReport> reports = run_bench(suite, reps);
    if (!out.empty()) write_text_file(out, bench_report_json(reports));
    std::cout << bench_report_table(reports);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"TextSnake geometry engine: label generation, reconstruction, "
                 "rectification, evaluation and benchmarks"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic snake corpus");
    SynthParams sp;
    int synth_images = 1;
    std::string synth_out, synth_oracle;
    synth->add_option("--seed", sp.seed, "RNG seed")->required();
    synth->add_option("--images", synth_images, "Number of images")->required();
    synth->add_option("--out", synth_out, "Annotations JSONL output")->required();
    synth->add_option("--oracle", synth_oracle, "Oracle JSONL output (axis + radii)");
    synth->add_option("--count-min", sp.count_min, "Min instances per image");
    synth->add_option("--count-max", sp.count_max, "Max instances per image");
    synth->add_option("--size", sp.image_size, "Image side length, px");
    synth->add_option("--radius-min", sp.radius_min, "Min snake radius, px");
    synth->add_option("--radius-max", sp.radius_max, "Max snake radius, px");
    synth->add_option("--curvature-max", sp.curvature_max, "Max curvature, rad/px");
    synth->add_option("--length-min", sp.length_min, "Min axis length, px");
    synth->add_option("--length-max", sp.length_max, "Max axis length, px");
    synth->add_option("--min-sep", sp.min_separation, "Min instance separation, px");

    // gen-labels
    auto* gen = app.add_subcommand("gen-labels", "Render ground-truth maps (one TSM1 per image)");
    SnakeParams snake_params;
    std::string gen_ann, gen_out_dir;
    gen->add_option("--ann", gen_ann, "Annotations JSONL")->required();
    gen->add_option("--out-dir", gen_out_dir, "Output directory")->required();
    gen->add_option("--samples", snake_params.n_samples, "Anchor samples per sideline");
    gen->add_flag("--adaptive", snake_params.adaptive_samples,
                  "1 sample per 2 px of sideline, clamped to [8, 128]");

    // reconstruct
    auto* rec = app.add_subcommand("reconstruct", "Detect instances from TSM1 maps");
    PostprocParams pp;
    std::string rec_maps_dir, rec_out;
    rec->add_option("--maps", rec_maps_dir, "Directory of .tsm files")->required();
    rec->add_option("--t-tr", pp.t_tr, "TR threshold");
    rec->add_option("--t-tcl", pp.t_tcl, "TCL threshold");
    rec->add_flag("--icdar-filters", pp.icdar_filters, "Apply ICDAR size filters");
    rec->add_option("--min-side", pp.min_side_px, "ICDAR preset: min short side, px");
    rec->add_option("--min-area", pp.min_area_px, "ICDAR preset: min region area, px^2");
    rec->add_option("--out", rec_out, "Detections JSONL output")->required();

    // roundtrip
    auto* rt = app.add_subcommand("roundtrip", "Labels -> detect -> per-instance IoU report");
    SnakeParams rt_snake_params;
    PostprocParams rt_pp;
    std::string rt_ann, rt_report;
    rt->add_option("--ann", rt_ann, "Annotations JSONL")->required();
    rt->add_option("--report", rt_report, "Report JSON output")->required();
    rt->add_option("--t-tr", rt_pp.t_tr, "TR threshold");
    rt->add_option("--t-tcl", rt_pp.t_tcl, "TCL threshold");
    rt->add_option("--samples", rt_snake_params.n_samples, "Anchor samples per sideline");

    // eval
    auto* ev = app.add_subcommand("eval", "Score detections against ground truth");
    std::string ev_det, ev_gt, ev_report;
    double ev_iou = 0.5;
    ev->add_option("--det", ev_det, "Detections JSONL")->required();
    ev->add_option("--gt", ev_gt, "Ground-truth JSONL")->required();
    ev->add_option("--iou", ev_iou, "IoU threshold");
    ev->add_option("--report", ev_report, "Report JSON output")->required();

    // render
    auto* rn = app.add_subcommand("render", "Overlay detections and GT on an image");
    std::string rn_image, rn_det, rn_gt, rn_out;
    rn->add_option("--image", rn_image, "Input PNG")->required();
    rn->add_option("--det", rn_det, "Detections JSONL");
    rn->add_option("--gt", rn_gt, "Ground-truth JSONL");
    rn->add_option("--out", rn_out, "Output PNG")->required();

    // rectify
    auto* rf = app.add_subcommand("rectify", "Unwarp detections into canonical strips");
    std::string rf_image, rf_det, rf_out_dir;
    rf->add_option("--image", rf_image, "Input PNG")->required();
    rf->add_option("--det", rf_det, "Detections JSONL")->required();
    rf->add_option("--out-dir", rf_out_dir, "Output directory")->required();

    // bench
    auto* bn = app.add_subcommand("bench", "Micro-benchmarks of the hot paths");
    std::string bn_suite = "all", bn_out;
    int bn_reps = 7;
    bn->add_option("--suite", bn_suite, "Case name or 'all'");
    bn->add_option("--reps", bn_reps, "Repetitions (>= 5)");
    bn->add_option("--out", bn_out, "Report JSON output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (synth->parsed()) return run_synth(synth_out, synth_oracle, synth_images, sp);
        if (gen->parsed()) return run_gen_labels(gen_ann, gen_out_dir, snake_params);
        if (rec->parsed()) return run_reconstruct(rec_maps_dir, rec_out, pp);
        if (rt->parsed()) return run_roundtrip(rt_ann, rt_report, rt_snake_params, rt_pp);
        if (ev->parsed()) return run_eval(ev_det, ev_gt, ev_iou, ev_report);
        if (rn->parsed()) return run_render(rn_image, rn_det, rn_gt, rn_out);
        if (rf->parsed()) return run_rectify(rf_image, rf_det, rf_out_dir);
        if (bn->parsed()) return run_bench_cmd(bn_suite, bn_reps, bn_out);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
