#include "dbf/dataset_io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace dbf {

using nlohmann::json;

namespace {

json part_to_json(const std::optional<Eigen::MatrixX3d>& part) {
    if (!part) return nullptr;
    json arr = json::array();
    for (Eigen::Index i = 0; i < part->rows(); ++i)
        arr.push_back({(*part)(i, 0), (*part)(i, 1), (*part)(i, 2)});
    return arr;
}

std::optional<Eigen::MatrixX3d> part_from_json(const json& j, const char* name) {
    if (j.is_null()) return std::nullopt;
    if (!j.is_array()) throw DataError(std::string("bad landmark array for ") + name);
    Eigen::MatrixX3d m(j.size(), 3);
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto& p = j[i];
        if (!p.is_array() || p.size() != 3)
            throw DataError(std::string("bad point in ") + name);
        for (int k = 0; k < 3; ++k) m(static_cast<Eigen::Index>(i), k) = p[k].get<double>();
    }
    return m;
}

}  // namespace

void write_jsonl(std::ostream& os, const std::vector<SkeletonSequence>& sequences) {
    for (const auto& seq : sequences) {
        for (const auto& f : seq.frames) {
            json j;
            j["session_id"] = seq.session_id;
            j["participant_id"] = seq.participant_id;
            j["frame_idx"] = f.frame_index;
            j["face"] = part_to_json(f.landmarks.face);
            j["body"] = part_to_json(f.landmarks.body);
            j["left_hand"] = part_to_json(f.landmarks.left_hand);
            j["right_hand"] = part_to_json(f.landmarks.right_hand);
            j["gaze"] = part_to_json(f.landmarks.gaze);
            j["quality"] = {{"face", f.quality.face},
                            {"body", f.quality.body},
                            {"left_hand", f.quality.left_hand},
                            {"right_hand", f.quality.right_hand}};
            os << j.dump() << '\n';
        }
    }
}

void write_jsonl_file(const std::string& path, const std::vector<SkeletonSequence>& sequences) {
    std::ofstream os(path);
    if (!os) throw DataError("cannot open for writing: " + path);
    write_jsonl(os, sequences);
}

std::vector<SkeletonSequence> read_jsonl(std::istream& is, const SkeletonConfig& cfg) {
    std::vector<SkeletonSequence> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            std::ostringstream os;
            os << "JSONL parse error at line " << lineno << ": " << e.what();
            throw DataError(os.str());
        }
        Frame f;
        f.frame_index = j.at("frame_idx").get<long>();
        f.landmarks.face = part_from_json(j.at("face"), "face");
        f.landmarks.body = part_from_json(j.at("body"), "body");
        f.landmarks.left_hand = part_from_json(j.at("left_hand"), "left_hand");
        f.landmarks.right_hand = part_from_json(j.at("right_hand"), "right_hand");
        f.landmarks.gaze = part_from_json(j.at("gaze"), "gaze");
        const auto& q = j.at("quality");
        f.quality.face = q.at("face").get<bool>();
        f.quality.body = q.at("body").get<bool>();
        f.quality.left_hand = q.at("left_hand").get<bool>();
        f.quality.right_hand = q.at("right_hand").get<bool>();

        const std::string sid = j.at("session_id").get<std::string>();
        const std::string pid = j.at("participant_id").get<std::string>();
        if (out.empty() || out.back().session_id != sid || out.back().participant_id != pid) {
            out.push_back(SkeletonSequence{sid, pid, {}});
        }
        out.back().frames.push_back(std::move(f));
    }
    for (const auto& seq : out) validate(seq, cfg);
    return out;
}

std::vector<SkeletonSequence> read_jsonl_file(const std::string& path, const SkeletonConfig& cfg) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open: " + path);
    return read_jsonl(is, cfg);
}

}  // namespace dbf
