#ifndef ADJDG_CSV_HPP
#define ADJDG_CSV_HPP

#include <string>
#include <vector>

#include "adjdg/dg_field.hpp"
#include "adjdg/objective.hpp"

namespace adjdg {

/// CSV writer; every file starts with '#'-prefixed header lines carrying the
/// resolved run configuration and the artifact version.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header_lines,
            const std::vector<std::string>& columns);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<double>& values);
  void raw_row(const std::string& line);

 private:
  struct Impl;
  Impl* impl_;
};

std::vector<std::string> config_header(const std::string& resolved_config);

// One row per (element, node): element,node,x,<components...>[,time prefix].
void write_field_csv(const std::string& path, const DgField& field,
                     const std::vector<std::string>& header_lines);
void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const std::vector<std::string>& header_lines);
// Columns: dof,location,volume,face,regularization,total,comparator_total.
void write_gradient_csv(const std::string& path, const GradientReport& report,
                        const std::vector<std::string>& header_lines);

std::string format_double(double v);

}  // namespace adjdg

#endif
