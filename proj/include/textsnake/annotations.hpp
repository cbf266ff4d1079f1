#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "textsnake/labelgen.hpp"
#include "textsnake/postproc.hpp"

namespace textsnake {

/// Annotations for one image in the canonical interchange format.
struct AnnotationRecord {
    std::string image_id;
    int height = 0;  // 0 when the source format carries no size (ICDAR text)
    int width = 0;
    std::vector<AnnotatedInstance> instances;
};

/// Parses ICDAR-style quad annotations: one instance per line,
/// "x1,y1,x2,y2,x3,y3,x4,y4,transcription". Transcription "###" marks a
/// don't-care region. Returns a single record carrying `image_id`.
std::vector<AnnotationRecord> parse_icdar(const std::string& text,
                                          const std::string& image_id = "icdar");

/// Parses JSON-lines annotations, one record per line:
///   {"image": str, "size": [h, w], "instances": [{"polygon": [[x, y], ...],
///    "ignore": bool}]}
/// Missing "ignore" defaults to false. Duplicate image ids are kept as
/// separate records; a warning is appended to `warnings` when given.
std::vector<AnnotationRecord> parse_polyjson(const std::string& text,
                                             std::vector<std::string>* warnings = nullptr);

/// Serializes records in the canonical JSONL schema, one record per line.
std::string write_annotations(const std::vector<AnnotationRecord>& records);

/// One image's detections for the detections JSONL stream.
struct DetectionRecord {
    std::string image_id;
    int height = 0;
    int width = 0;
    std::vector<Detection> detections;  // boundary/snake/score populated
};

std::string write_detections(const std::vector<DetectionRecord>& records);
std::vector<DetectionRecord> parse_detections(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace textsnake
