#include "lieint/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace lieint {

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    const std::string& c = cells[i];
    if (c.find_first_of(",\"\n") == std::string::npos) {
      out += c;
      continue;
    }
    out += '"';
    for (char ch : c) {
      if (ch == '"') out += '"';
      out += ch;
    }
    out += '"';
  }
  out += '\n';
  return out;
}

namespace {

std::vector<std::string> numbered(const std::string& prefix, int count) {
  std::vector<std::string> out;
  for (int i = 1; i <= count; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

void append(std::vector<std::string>& to, const std::vector<std::string>& more) {
  to.insert(to.end(), more.begin(), more.end());
}

}  // namespace

std::string xi_csv(const std::vector<TimedVector>& curve) {
  const int n = curve.empty() ? 0 : static_cast<int>(curve.front().value.size());
  std::vector<std::string> header{"t"};
  append(header, numbered("xi_", n));
  std::string out = csv_line(header);
  for (const auto& node : curve) {
    std::vector<std::string> row{format_real(node.t)};
    for (int i = 0; i < n; ++i) row.push_back(format_real(node.value(i)));
    out += csv_line(row);
  }
  return out;
}

std::string classification_csv(const FloquetClassification& classification) {
  std::string out = csv_line({"re_lambda", "im_lambda", "abs_lambda", "admissibility", "tag"});
  for (const auto& e : classification.eigenpairs) {
    out += csv_line({format_real(e.value.real()), format_real(e.value.imag()), format_real(std::abs(e.value)),
                     format_real(e.admissibility), to_string(e.tag)});
  }
  return out;
}

std::string generators_csv(const std::vector<PeriodicGenerator>& generators, int dim) {
  std::vector<std::string> header{"period_multiple", "provenance", "residual"};
  append(header, numbered("v_", dim));
  std::string out = csv_line(header);
  for (const auto& g : generators) {
    std::vector<std::string> row{std::to_string(g.period_multiple), to_string(g.provenance), format_real(g.residual)};
    for (int i = 0; i < dim; ++i) row.push_back(format_real(g.vector(i)));
    out += csv_line(row);
  }
  return out;
}

std::string trajectory_csv(const PhaseTrajectory& trajectory, int degrees,
                           const std::vector<std::function<double(double, const PhasePoint&)>>& integrals) {
  std::vector<std::string> header{"t"};
  append(header, numbered("q_", degrees));
  append(header, numbered("p_", degrees));
  append(header, numbered("I_", static_cast<int>(integrals.size())));
  std::string out = csv_line(header);
  for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
    const double t = trajectory.times[k];
    const PhasePoint& x = trajectory.points[k];
    std::vector<std::string> row{format_real(t)};
    for (Eigen::Index i = 0; i < x.size(); ++i) row.push_back(format_real(x(i)));
    for (const auto& f : integrals) row.push_back(format_real(f(t, x)));
    out += csv_line(row);
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << content;
  f.close();
  if (!f) throw IoError("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  std::ostringstream os;
  os << f.rdbuf();
  if (f.bad()) throw IoError("failed reading " + path.string());
  return os.str();
}

}  // namespace lieint
