#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dbf/skeleton.hpp"

namespace dbf {

// Canonical interchange format: JSON Lines, one object per frame.
//
//   {"session_id": "s0", "participant_id": "a", "frame_idx": 0,
//    "face": [[x,y,z], ...28] | null, "body": [...10] | null,
//    "left_hand": [...20] | null, "right_hand": [...20] | null,
//    "gaze": [[x,y,z], ...G] | null,
//    "quality": {"face": true, "body": true, "left_hand": true, "right_hand": true}}
//
// Frames of one (session, participant) pair must be contiguous and ordered.

void write_jsonl(std::ostream& os, const std::vector<SkeletonSequence>& sequences);
void write_jsonl_file(const std::string& path, const std::vector<SkeletonSequence>& sequences);

std::vector<SkeletonSequence> read_jsonl(std::istream& is, const SkeletonConfig& cfg);
std::vector<SkeletonSequence> read_jsonl_file(const std::string& path, const SkeletonConfig& cfg);

}  // namespace dbf
