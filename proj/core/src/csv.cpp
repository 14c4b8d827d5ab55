#include "adjdg/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "adjdg/version.hpp"

namespace adjdg {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct CsvWriter::Impl {
  std::ofstream out;
  size_t n_columns;
};

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::string>& columns)
    : impl_(new Impl{std::ofstream(path), columns.size()}) {
  require(impl_->out.good(), "csv: cannot open " + path);
  for (const auto& h : header) impl_->out << "# " << h << "\n";
  for (size_t i = 0; i < columns.size(); ++i)
    impl_->out << columns[i] << (i + 1 < columns.size() ? "," : "\n");
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::row(const std::vector<double>& values) {
  require(values.size() == impl_->n_columns, "csv: column count mismatch");
  for (size_t i = 0; i < values.size(); ++i)
    impl_->out << format_double(values[i]) << (i + 1 < values.size() ? "," : "\n");
}

void CsvWriter::raw_row(const std::string& line) { impl_->out << line << "\n"; }

std::vector<std::string> config_header(const std::string& resolved_config) {
  std::vector<std::string> lines;
  lines.push_back(std::string("adjdg version ") + kVersion);
  std::istringstream is(resolved_config);
  std::string l;
  while (std::getline(is, l))
    if (!l.empty()) lines.push_back(l);
  return lines;
}

void write_field_csv(const std::string& path, const DgField& field,
                     const std::vector<std::string>& header) {
  std::vector<std::string> cols{"element", "node", "x"};
  for (const auto& n : field.names) cols.push_back(n);
  CsvWriter w(path, header, cols);
  for (int e = 0; e < field.n_elements(); ++e)
    for (int i = 0; i < field.n_nodes(); ++i) {
      std::vector<double> row{static_cast<double>(e), static_cast<double>(i),
                              field.node_x(e, i)};
      for (int c = 0; c < field.n_components(); ++c) row.push_back(field.at(c, e, i));
      w.row(row);
    }
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const std::vector<std::string>& header) {
  require(!traj.snapshots.empty(), "trajectory csv: empty trajectory");
  const DgField& f0 = traj.snapshots.front();
  std::vector<std::string> cols{"time", "element", "node", "x"};
  for (const auto& n : f0.names) cols.push_back(n);
  CsvWriter w(path, header, cols);
  for (size_t s = 0; s < traj.snapshots.size(); ++s) {
    const DgField& f = traj.snapshots[s];
    const double t = traj.snapshot_steps[s] * traj.dt;
    for (int e = 0; e < f.n_elements(); ++e)
      for (int i = 0; i < f.n_nodes(); ++i) {
        std::vector<double> row{t, static_cast<double>(e), static_cast<double>(i),
                                f.node_x(e, i)};
        for (int c = 0; c < f.n_components(); ++c) row.push_back(f.at(c, e, i));
        w.row(row);
      }
  }
}

void write_gradient_csv(const std::string& path, const GradientReport& rep,
                        const std::vector<std::string>& header) {
  CsvWriter w(path, header,
              {"dof", "location", "volume", "face", "regularization", "total",
               "comparator_total"});
  for (size_t d = 0; d < rep.total.size(); ++d)
    w.row({static_cast<double>(d), rep.locations[d], rep.volume[d], rep.face[d],
           rep.regularization[d], rep.total[d], rep.comparator[d]});
}

}  // namespace adjdg
