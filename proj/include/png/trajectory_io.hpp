#ifndef PNG_TRAJECTORY_IO_HPP
#define PNG_TRAJECTORY_IO_HPP

// Trajectory CSV:
//
//   # png-trajectory 1
//   # problem=toy
//   # mode=png
//   # config_hash=fnv1a64:0123456789abcdef
//   # status=complete                 (or "# status=partial <reason>")
//   iter,point_id,theta_0,...,theta_{n-1},loss_0,...,loss_{m-1},g,phi,F,v_norm
//   0,0,...
//
// Numbers use the shortest round-trip decimal form, so reading a file back
// reproduces every double bit for bit. A switched-off control is the token `off`.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "png/navigator.hpp"

namespace png {

class TrajectoryFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrajectoryHeader {
  std::string problem;
  std::string mode;
  std::string config_hash;
  bool complete = true;
  std::string failure;
  Eigen::Index dimension = 0;
  Eigen::Index num_objectives = 0;
};

struct TrajectoryFile {
  TrajectoryHeader header;
  std::vector<TrajectoryRecord> records;
};

/// Shortest decimal string that parses back to exactly `x`.
std::string format_double(double x);
/// Inverse of format_double; throws TrajectoryFormatError on malformed text.
double parse_double(std::string_view text);

void write_trajectory(std::ostream& os, const TrajectoryFile& file);
TrajectoryFile read_trajectory(std::istream& is);

void save_trajectory(const std::string& path, const TrajectoryFile& file);
TrajectoryFile load_trajectory(const std::string& path);

/// Loss vectors from either a trajectory file or a plain numeric CSV (one
/// vector per row; '#' comments and a non-numeric header line are skipped).
std::vector<LossVector> load_loss_table(const std::string& path);

}  // namespace png

#endif  // PNG_TRAJECTORY_IO_HPP
