#pragma once

#include <iosfwd>
#include <string>

#include "seer/train.hpp"

namespace seer {

// Layout: "SEERv1", u64 header length (LE), JSON header, then f64 LE tensor
// data in row-major order at the offsets listed in the header.
inline constexpr char kCheckpointMagic[] = "SEERv1";

void save_checkpoint(std::ostream& out, const TrainedModel& m);
void save_checkpoint_file(const std::string& path, const TrainedModel& m);
// Throws io_failure on truncation or bad magic, shape_mismatch on tensor dims.
TrainedModel load_checkpoint(std::istream& in);
TrainedModel load_checkpoint_file(const std::string& path);

}  // namespace seer
