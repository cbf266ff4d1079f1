#include "textsnake/annotations.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace textsnake {

namespace {

using nlohmann::json;

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string line;
    std::istringstream in(text);
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

void strip_bom(std::string& s) {
    if (s.size() >= 3 && static_cast<unsigned char>(s[0]) == 0xEF &&
        static_cast<unsigned char>(s[1]) == 0xBB && static_cast<unsigned char>(s[2]) == 0xBF)
        s.erase(0, 3);
}

json polygon_to_json(const Polygon& poly) {
    json arr = json::array();
    for (const Point2& p : poly.vertices()) arr.push_back(json::array({p.x, p.y}));
    return arr;
}

Polygon polygon_from_json(const json& arr, std::size_t line_no, const std::string& path) {
    if (!arr.is_array() || arr.size() < 3)
        throw ParseError(line_no, path + ": polygon needs >= 3 vertices");
    std::vector<Point2> pts;
    pts.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const json& v = arr[i];
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            throw ParseError(line_no, path + "[" + std::to_string(i) + "]: expected [x, y]");
        pts.emplace_back(v[0].get<double>(), v[1].get<double>());
    }
    return Polygon(std::move(pts));
}

}  // namespace

std::vector<AnnotationRecord> parse_icdar(const std::string& text, const std::string& image_id) {
    AnnotationRecord record;
    record.image_id = image_id;

    std::vector<std::string> lines = split_lines(text);
    for (std::size_t li = 0; li < lines.size(); ++li) {
        std::string line = lines[li];
        if (li == 0) strip_bom(line);
        if (line.empty()) continue;

        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        if (fields.size() < 9)
            throw ParseError(li + 1, "expected 8 coordinates and a transcription, got " +
                                         std::to_string(fields.size()) + " fields");

        double coords[8];
        for (int i = 0; i < 8; ++i) {
            try {
                std::size_t used = 0;
                coords[i] = std::stod(fields[i], &used);
                if (used != fields[i].size()) throw std::invalid_argument("trailing junk");
            } catch (const std::exception&) {
                throw ParseError(li + 1, "coordinate " + std::to_string(i + 1) +
                                             " is not a number: '" + fields[i] + "'");
            }
        }
        // The transcription is everything after the 8th comma; it may itself
        // contain commas.
        std::string transcription = fields[8];
        for (std::size_t i = 9; i < fields.size(); ++i) transcription += "," + fields[i];

        AnnotatedInstance inst;
        inst.polygon = Polygon({{coords[0], coords[1]},
                                {coords[2], coords[3]},
                                {coords[4], coords[5]},
                                {coords[6], coords[7]}});
        inst.ignore = transcription == "###";
        record.instances.push_back(std::move(inst));
    }
    return {record};
}

std::vector<AnnotationRecord> parse_polyjson(const std::string& text,
                                             std::vector<std::string>* warnings) {
    std::vector<AnnotationRecord> records;
    std::vector<std::string> seen_ids;

    std::vector<std::string> lines = split_lines(text);
    for (std::size_t li = 0; li < lines.size(); ++li) {
        std::string line = lines[li];
        if (li == 0) strip_bom(line);
        if (line.empty()) continue;
        const std::size_t line_no = li + 1;

        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(line_no, e.what());
        }
        if (!obj.is_object()) throw ParseError(line_no, "$: expected a JSON object");
        if (!obj.contains("image") || !obj["image"].is_string())
            throw ParseError(line_no, "$.image: expected a string");
        if (!obj.contains("size") || !obj["size"].is_array() || obj["size"].size() != 2 ||
            !obj["size"][0].is_number_integer() || !obj["size"][1].is_number_integer())
            throw ParseError(line_no, "$.size: expected [h, w]");
        if (!obj.contains("instances") || !obj["instances"].is_array())
            throw ParseError(line_no, "$.instances: expected an array");

        AnnotationRecord rec;
        rec.image_id = obj["image"].get<std::string>();
        if (rec.image_id.empty()) throw ParseError(line_no, "$.image: must be nonempty");
        rec.height = obj["size"][0].get<int>();
        rec.width = obj["size"][1].get<int>();
        if (rec.height <= 0 || rec.width <= 0)
            throw ParseError(line_no, "$.size: dimensions must be positive");

        const json& insts = obj["instances"];
        for (std::size_t i = 0; i < insts.size(); ++i) {
            const std::string path = "$.instances[" + std::to_string(i) + "]";
            if (!insts[i].is_object()) throw ParseError(line_no, path + ": expected an object");
            if (!insts[i].contains("polygon"))
                throw ParseError(line_no, path + ".polygon: missing");
            AnnotatedInstance inst;
            inst.polygon = polygon_from_json(insts[i]["polygon"], line_no, path + ".polygon");
            if (insts[i].contains("ignore")) {
                if (!insts[i]["ignore"].is_boolean())
                    throw ParseError(line_no, path + ".ignore: expected a boolean");
                inst.ignore = insts[i]["ignore"].get<bool>();
            }
            rec.instances.push_back(std::move(inst));
        }

        for (const std::string& id : seen_ids)
            if (id == rec.image_id) {
                if (warnings)
                    warnings->push_back("duplicate image id '" + rec.image_id + "' at line " +
                                        std::to_string(line_no));
                break;
            }
        seen_ids.push_back(rec.image_id);
        records.push_back(std::move(rec));
    }
    return records;
}

std::string write_annotations(const std::vector<AnnotationRecord>& records) {
    std::string out;
    for (const AnnotationRecord& rec : records) {
        json obj;
        obj["image"] = rec.image_id;
        obj["size"] = json::array({rec.height, rec.width});
        json insts = json::array();
        for (const AnnotatedInstance& inst : rec.instances) {
            json j;
            j["polygon"] = polygon_to_json(inst.polygon);
            j["ignore"] = inst.ignore;
            insts.push_back(std::move(j));
        }
        obj["instances"] = std::move(insts);
        out += obj.dump();
        out += '\n';
    }
    return out;
}

std::string write_detections(const std::vector<DetectionRecord>& records) {
    std::string out;
    for (const DetectionRecord& rec : records) {
        json obj;
        obj["image"] = rec.image_id;
        obj["size"] = json::array({rec.height, rec.width});
        json dets = json::array();
        for (const Detection& det : rec.detections) {
            json j;
            j["polygon"] = polygon_to_json(det.boundary);
            j["score"] = det.score;
            json snake = json::array();
            for (const Disk& d : det.snake.disks)
                snake.push_back(json::array({d.center.x, d.center.y, d.radius, d.theta}));
            j["snake"] = std::move(snake);
            dets.push_back(std::move(j));
        }
        obj["detections"] = std::move(dets);
        out += obj.dump();
        out += '\n';
    }
    return out;
}

std::vector<DetectionRecord> parse_detections(const std::string& text) {
    std::vector<DetectionRecord> records;
    std::vector<std::string> lines = split_lines(text);
    for (std::size_t li = 0; li < lines.size(); ++li) {
        std::string line = lines[li];
        if (li == 0) strip_bom(line);
        if (line.empty()) continue;
        const std::size_t line_no = li + 1;

        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(line_no, e.what());
        }
        if (!obj.contains("image") || !obj["image"].is_string())
            throw ParseError(line_no, "$.image: expected a string");
        DetectionRecord rec;
        rec.image_id = obj["image"].get<std::string>();
        if (obj.contains("size") && obj["size"].is_array() && obj["size"].size() == 2) {
            rec.height = obj["size"][0].get<int>();
            rec.width = obj["size"][1].get<int>();
        }
        if (!obj.contains("detections") || !obj["detections"].is_array())
            throw ParseError(line_no, "$.detections: expected an array");
        const json& dets = obj["detections"];
        for (std::size_t i = 0; i < dets.size(); ++i) {
            const std::string path = "$.detections[" + std::to_string(i) + "]";
            Detection det;
            if (!dets[i].contains("polygon"))
                throw ParseError(line_no, path + ".polygon: missing");
            det.boundary = polygon_from_json(dets[i]["polygon"], line_no, path + ".polygon");
            if (dets[i].contains("score")) det.score = dets[i]["score"].get<double>();
            if (dets[i].contains("snake")) {
                for (const json& d : dets[i]["snake"]) {
                    if (!d.is_array() || d.size() != 4)
                        throw ParseError(line_no, path + ".snake: expected [cx, cy, r, theta]");
                    det.snake.disks.emplace_back(
                        Point2{d[0].get<double>(), d[1].get<double>()}, d[2].get<double>(),
                        d[3].get<double>());
                }
            }
            rec.detections.push_back(std::move(det));
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw IoError("failed writing: " + path);
}

}  // namespace textsnake
