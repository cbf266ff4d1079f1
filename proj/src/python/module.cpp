#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "textsnake/annotations.hpp"
#include "textsnake/evalkit.hpp"
#include "textsnake/labelgen.hpp"
#include "textsnake/maps.hpp"
#include "textsnake/objectives.hpp"
#include "textsnake/pipeline.hpp"
#include "textsnake/postproc.hpp"
#include "textsnake/rectify.hpp"
#include "textsnake/synth.hpp"

namespace py = pybind11;
using namespace textsnake;

namespace {

Polygon polygon_from_array(const py::array_t<double>& arr) {
    if (arr.ndim() != 2 || arr.shape(1) != 2)
        throw py::value_error("polygon must be an (N, 2) array");
    auto a = arr.unchecked<2>();
    std::vector<Point2> pts;
    pts.reserve(static_cast<std::size_t>(arr.shape(0)));
    for (py::ssize_t i = 0; i < arr.shape(0); ++i) pts.emplace_back(a(i, 0), a(i, 1));
    return Polygon(std::move(pts));
}

py::array_t<double> polygon_to_array(const Polygon& poly) {
    py::array_t<double> out({static_cast<py::ssize_t>(poly.size()), py::ssize_t{2}});
    auto a = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < poly.size(); ++i) {
        a(static_cast<py::ssize_t>(i), 0) = poly[i].x;
        a(static_cast<py::ssize_t>(i), 1) = poly[i].y;
    }
    return out;
}

std::vector<Point2> points_from_array(const py::array_t<double>& arr) {
    if (arr.ndim() != 2 || arr.shape(1) != 2)
        throw py::value_error("points must be an (N, 2) array");
    auto a = arr.unchecked<2>();
    std::vector<Point2> pts;
    pts.reserve(static_cast<std::size_t>(arr.shape(0)));
    for (py::ssize_t i = 0; i < arr.shape(0); ++i) pts.emplace_back(a(i, 0), a(i, 1));
    return pts;
}

PixelMask mask_from_array(const py::array_t<bool>& arr) {
    if (arr.ndim() != 2) throw py::value_error("mask must be a 2-d bool array");
    auto a = arr.unchecked<2>();
    PixelMask mask(static_cast<int>(arr.shape(0)), static_cast<int>(arr.shape(1)));
    for (py::ssize_t r = 0; r < arr.shape(0); ++r)
        for (py::ssize_t c = 0; c < arr.shape(1); ++c)
            if (a(r, c)) mask.set(static_cast<int>(r), static_cast<int>(c));
    return mask;
}

py::array_t<bool> mask_to_array(const PixelMask& mask) {
    py::array_t<bool> out({py::ssize_t{mask.height()}, py::ssize_t{mask.width()}});
    auto a = out.mutable_unchecked<2>();
    for (int r = 0; r < mask.height(); ++r)
        for (int c = 0; c < mask.width(); ++c) a(r, c) = mask.get(r, c);
    return out;
}

py::array_t<float> plane_to_array(const std::vector<float>& plane, int h, int w) {
    py::array_t<float> out({py::ssize_t{h}, py::ssize_t{w}});
    std::copy(plane.begin(), plane.end(), out.mutable_data());
    return out;
}

std::vector<float> plane_from_array(const py::array_t<float>& arr, int h, int w,
                                    const char* name) {
    if (arr.ndim() != 2 || arr.shape(0) != h || arr.shape(1) != w)
        throw py::value_error(std::string(name) + ": shape mismatch");
    auto contiguous = py::array_t<float, py::array::c_style | py::array::forcecast>(arr);
    return {contiguous.data(), contiguous.data() + static_cast<std::size_t>(h) * w};
}

SnakeDescriptor snake_from_array(const py::array_t<double>& arr) {
    if (arr.ndim() != 2 || arr.shape(1) != 4)
        throw py::value_error("snake must be an (N, 4) array of (cx, cy, r, theta)");
    auto a = arr.unchecked<2>();
    SnakeDescriptor snake;
    for (py::ssize_t i = 0; i < arr.shape(0); ++i)
        snake.disks.emplace_back(Point2{a(i, 0), a(i, 1)}, a(i, 2), a(i, 3));
    return snake;
}

py::array_t<double> snake_to_array(const SnakeDescriptor& snake) {
    py::array_t<double> out({static_cast<py::ssize_t>(snake.disks.size()), py::ssize_t{4}});
    auto a = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < snake.disks.size(); ++i) {
        const auto idx = static_cast<py::ssize_t>(i);
        a(idx, 0) = snake.disks[i].center.x;
        a(idx, 1) = snake.disks[i].center.y;
        a(idx, 2) = snake.disks[i].radius;
        a(idx, 3) = snake.disks[i].theta;
    }
    return out;
}

RasterImage image_from_array(const py::array_t<std::uint8_t>& arr) {
    if (arr.ndim() != 2 && arr.ndim() != 3)
        throw py::value_error("image must be (h, w) or (h, w, c) uint8");
    const int channels = arr.ndim() == 3 ? static_cast<int>(arr.shape(2)) : 1;
    if (channels != 1 && channels != 3) throw py::value_error("image must have 1 or 3 channels");
    auto contiguous =
        py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>(arr);
    RasterImage img(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)), channels);
    std::copy(contiguous.data(), contiguous.data() + img.samples.size(), img.samples.begin());
    return img;
}

py::array image_to_array(const RasterImage& img) {
    if (img.channels == 1) {
        py::array_t<std::uint8_t> out({py::ssize_t{img.height}, py::ssize_t{img.width}});
        std::copy(img.samples.begin(), img.samples.end(), out.mutable_data());
        return out;
    }
    py::array_t<std::uint8_t> out(
        {py::ssize_t{img.height}, py::ssize_t{img.width}, py::ssize_t{img.channels}});
    std::copy(img.samples.begin(), img.samples.end(), out.mutable_data());
    return out;
}

}  // namespace

PYBIND11_MODULE(_textsnake, m) {
    m.doc() = "Disk-chain text geometry: label generation, reconstruction, "
              "rectification, losses and evaluation";

    py::register_exception<Error>(m, "TextsnakeError");

    py::class_<GeometryMaps>(m, "GeometryMaps")
        .def(py::init<int, int>(), py::arg("height"), py::arg("width"))
        .def_property_readonly("height", &GeometryMaps::height)
        .def_property_readonly("width", &GeometryMaps::width)
        .def_property_readonly("tr", [](const GeometryMaps& g) {
            return plane_to_array(g.tr, g.height(), g.width());
        })
        .def_property_readonly("tcl", [](const GeometryMaps& g) {
            return plane_to_array(g.tcl, g.height(), g.width());
        })
        .def_property_readonly("r", [](const GeometryMaps& g) {
            return plane_to_array(g.r, g.height(), g.width());
        })
        .def_property_readonly("cos", [](const GeometryMaps& g) {
            return plane_to_array(g.cos_t, g.height(), g.width());
        })
        .def_property_readonly("sin", [](const GeometryMaps& g) {
            return plane_to_array(g.sin_t, g.height(), g.width());
        })
        .def_static("from_arrays",
                    [](const py::array_t<float>& tr, const py::array_t<float>& tcl,
                       const py::array_t<float>& r, const py::array_t<float>& cos,
                       const py::array_t<float>& sin) {
                        const int h = static_cast<int>(tr.shape(0));
                        const int w = static_cast<int>(tr.shape(1));
                        GeometryMaps g(h, w);
                        g.tr = plane_from_array(tr, h, w, "tr");
                        g.tcl = plane_from_array(tcl, h, w, "tcl");
                        g.r = plane_from_array(r, h, w, "r");
                        g.cos_t = plane_from_array(cos, h, w, "cos");
                        g.sin_t = plane_from_array(sin, h, w, "sin");
                        return g;
                    },
                    py::arg("tr"), py::arg("tcl"), py::arg("r"), py::arg("cos"), py::arg("sin"));

    py::class_<Detection>(m, "Detection")
        .def_property_readonly("polygon",
                               [](const Detection& d) { return polygon_to_array(d.boundary); })
        .def_property_readonly("snake", [](const Detection& d) { return snake_to_array(d.snake); })
        .def_property_readonly("region", [](const Detection& d) { return mask_to_array(d.region); })
        .def_readonly("score", &Detection::score);

    // geometry
    m.def("rasterize_polygon",
          [](const py::array_t<double>& poly, int h, int w) {
              return mask_to_array(rasterize_polygon(polygon_from_array(poly), h, w));
          },
          py::arg("polygon"), py::arg("h"), py::arg("w"));
    m.def("mask_iou",
          [](const py::array_t<bool>& a, const py::array_t<bool>& b) {
              return mask_iou(mask_from_array(a), mask_from_array(b));
          },
          py::arg("a"), py::arg("b"));
    m.def("min_area_rect",
          [](const py::array_t<double>& points) {
              const RotatedRect rect = min_area_rect(points_from_array(points));
              return py::make_tuple(rect.center.x, rect.center.y, rect.width, rect.height,
                                    rect.angle);
          },
          py::arg("points"), "Returns (cx, cy, width, height, angle)");
    m.def("fit_direction",
          [](const py::array_t<double>& points) { return fit_direction(points_from_array(points)); },
          py::arg("points"));
    m.def("disks_union_mask",
          [](const py::array_t<double>& snake, int h, int w) {
              return mask_to_array(disks_union_mask(snake_from_array(snake).disks, h, w));
          },
          py::arg("disks"), py::arg("h"), py::arg("w"));

    // labelgen
    m.def("edge_head_tail",
          [](const py::array_t<double>& poly) { return edge_head_tail(polygon_from_array(poly)); },
          py::arg("polygon"));
    m.def("extract_snake",
          [](const py::array_t<double>& poly, int n_samples, bool adaptive) {
              AnnotatedInstance inst;
              inst.polygon = polygon_from_array(poly);
              SnakeParams sp;
              sp.n_samples = n_samples;
              sp.adaptive_samples = adaptive;
              return snake_to_array(extract_snake(inst, sp));
          },
          py::arg("polygon"), py::arg("n_samples") = 32, py::arg("adaptive") = false);
    m.def("render_label_maps",
          [](const std::vector<py::array_t<double>>& snakes,
             const std::vector<py::array_t<double>>& polygons, int h, int w) {
              std::vector<SnakeDescriptor> sd;
              for (const auto& s : snakes) sd.push_back(snake_from_array(s));
              std::vector<Polygon> polys;
              for (const auto& p : polygons) polys.push_back(polygon_from_array(p));
              return render_label_maps(sd, polys, h, w);
          },
          py::arg("snakes"), py::arg("polygons"), py::arg("h"), py::arg("w"));
    m.def("generate_labels",
          [](const std::vector<py::array_t<double>>& polygons, int h, int w, int n_samples) {
              AnnotationRecord rec;
              rec.image_id = "py";
              rec.height = h;
              rec.width = w;
              for (const auto& p : polygons) {
                  AnnotatedInstance inst;
                  inst.polygon = polygon_from_array(p);
                  rec.instances.push_back(std::move(inst));
              }
              SnakeParams sp;
              sp.n_samples = n_samples;
              return generate_labels(rec, sp).maps;
          },
          py::arg("polygons"), py::arg("h"), py::arg("w"), py::arg("n_samples") = 32,
          "Ground-truth maps for a list of instance polygons");

    // maps
    m.def("binarize",
          [](const GeometryMaps& maps, double t_tr, double t_tcl) {
              const BinarizedMaps bin = binarize(maps, t_tr, t_tcl);
              return py::make_tuple(mask_to_array(bin.tr_mask), mask_to_array(bin.tcl_mask));
          },
          py::arg("maps"), py::arg("t_tr") = 0.4, py::arg("t_tcl") = 0.6);
    m.def("save_maps",
          [](const GeometryMaps& maps, const std::string& path) { save_maps(maps, path); },
          py::arg("maps"), py::arg("path"));
    m.def("load_maps", [](const std::string& path) { return load_maps(path); }, py::arg("path"));

    // postproc
    m.def("detect",
          [](const GeometryMaps& maps, double t_tr, double t_tcl, bool icdar_filters) {
              PostprocParams params;
              params.t_tr = t_tr;
              params.t_tcl = t_tcl;
              params.icdar_filters = icdar_filters;
              return detect(maps, params);
          },
          py::arg("maps"), py::arg("t_tr") = 0.4, py::arg("t_tcl") = 0.6,
          py::arg("icdar_filters") = false);

    // rectify
    m.def("rectify_instance",
          [](const py::array_t<std::uint8_t>& image, const py::array_t<double>& snake) {
              return image_to_array(rectify_instance(image_from_array(image), snake_from_array(snake)));
          },
          py::arg("image"), py::arg("snake"));

    // objectives
    m.def("smoothed_l1", &smoothed_l1, py::arg("x"));
    m.def("loss",
          [](const py::array_t<float>& tr_logit_neg, const py::array_t<float>& tr_logit_pos,
             const py::array_t<float>& tcl_logit_neg, const py::array_t<float>& tcl_logit_pos,
             const py::array_t<float>& r, const py::array_t<float>& cos,
             const py::array_t<float>& sin, const GeometryMaps& gt,
             const py::array_t<bool>& ignore) {
              const int h = gt.height(), w = gt.width();
              PredictionMaps pred(h, w);
              auto to_double = [&](const py::array_t<float>& a, const char* name) {
                  std::vector<float> f = plane_from_array(a, h, w, name);
                  return std::vector<double>(f.begin(), f.end());
              };
              pred.tr_logit_neg = to_double(tr_logit_neg, "tr_logit_neg");
              pred.tr_logit_pos = to_double(tr_logit_pos, "tr_logit_pos");
              pred.tcl_logit_neg = to_double(tcl_logit_neg, "tcl_logit_neg");
              pred.tcl_logit_pos = to_double(tcl_logit_pos, "tcl_logit_pos");
              pred.r = to_double(r, "r");
              pred.cos_t = to_double(cos, "cos");
              pred.sin_t = to_double(sin, "sin");
              const LossBreakdown out = loss(pred, gt, mask_from_array(ignore));
              py::dict d;
              d["l_tr"] = out.l_tr;
              d["l_tcl"] = out.l_tcl;
              d["l_r"] = out.l_r;
              d["l_sin"] = out.l_sin;
              d["l_cos"] = out.l_cos;
              d["total"] = out.total;
              return d;
          },
          py::arg("tr_logit_neg"), py::arg("tr_logit_pos"), py::arg("tcl_logit_neg"),
          py::arg("tcl_logit_pos"), py::arg("r"), py::arg("cos"), py::arg("sin"), py::arg("gt"),
          py::arg("ignore"));

    // evalkit
    m.def("match_and_score",
          [](const std::vector<py::array_t<double>>& det_polys,
             const std::vector<py::array_t<double>>& gt_polys,
             const std::vector<bool>& gt_ignore, int h, int w, double iou_thr) {
              std::vector<Detection> dets;
              for (const auto& p : det_polys) {
                  Detection d;
                  d.boundary = polygon_from_array(p);
                  dets.push_back(std::move(d));
              }
              std::vector<AnnotatedInstance> gts;
              for (std::size_t i = 0; i < gt_polys.size(); ++i) {
                  AnnotatedInstance inst;
                  inst.polygon = polygon_from_array(gt_polys[i]);
                  inst.ignore = i < gt_ignore.size() && gt_ignore[i];
                  gts.push_back(std::move(inst));
              }
              const ImageScore s = match_and_score(dets, gts, h, w, iou_thr);
              py::dict d;
              d["precision"] = s.precision;
              d["recall"] = s.recall;
              d["f_measure"] = s.f_measure;
              d["tp"] = s.tp;
              d["fp"] = s.fp;
              d["fn"] = s.fn;
              return d;
          },
          py::arg("det_polygons"), py::arg("gt_polygons"),
          py::arg("gt_ignore") = std::vector<bool>{}, py::arg("h"), py::arg("w"),
          py::arg("iou_thr") = 0.5);

    // synth
    m.def("synth_snakes",
          [](std::uint64_t seed, int images, int count_min, int count_max, int image_size) {
              SynthParams params;
              params.seed = seed;
              params.count_min = count_min;
              params.count_max = count_max;
              params.image_size = image_size;
              const SynthResult result = synth_snakes(params, images);
              py::list out;
              for (std::size_t i = 0; i < result.records.size(); ++i) {
                  py::dict rec;
                  rec["image"] = result.records[i].image_id;
                  py::list polys;
                  for (const AnnotatedInstance& inst : result.records[i].instances)
                      polys.append(polygon_to_array(inst.polygon));
                  rec["polygons"] = std::move(polys);
                  out.append(std::move(rec));
              }
              return out;
          },
          py::arg("seed"), py::arg("images") = 1, py::arg("count_min") = 1,
          py::arg("count_max") = 4, py::arg("image_size") = 512);
}
