#include "nitsche/export.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "nitsche/errors.hpp"

namespace nitsche {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void check_written(const std::ofstream& out, const std::filesystem::path& path) {
  if (!out) throw IoError("failed writing " + path.string());
}

double parse_double(const std::string& text, int line) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw IoError("profile line " + std::to_string(line) + ": bad number '" + text + "'");
  }
  return v;
}

}  // namespace

std::vector<ProfileRow> profile_rows(const PostProcessed& post) {
  std::vector<ProfileRow> rows;
  rows.reserve(post.profile.size());
  for (const auto& p : post.profile) {
    rows.push_back({p.segment, p.s, p.u_n, p.u_t, p.theta, p.jump_n[0], p.jump_n[1], p.sigma_n[0], p.sigma_n[1]});
  }
  return rows;
}

void write_profile_csv(std::ostream& out, const std::vector<ProfileRow>& rows) {
  out << kProfileHeader << '\n';
  out << std::setprecision(17);
  for (const auto& r : rows) {
    out << r.segment << ',' << r.s << ',' << r.u_n << ',' << r.u_t << ',' << r.theta << ',' << r.jump_n_1 << ','
        << r.jump_n_2 << ',' << r.sigma_n_1 << ',' << r.sigma_n_2 << '\n';
  }
}

void write_profile_csv(const std::filesystem::path& path, const std::vector<ProfileRow>& rows) {
  auto out = open_output(path);
  write_profile_csv(out, rows);
  check_written(out, path);
}

std::vector<ProfileRow> read_profile_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kProfileHeader) throw IoError("profile: missing or unexpected header");
  std::vector<ProfileRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 9) throw IoError("profile line " + std::to_string(lineno) + ": expected 9 columns");
    ProfileRow r;
    r.segment = static_cast<int>(parse_double(cells[0], lineno));
    double* fields[] = {&r.s, &r.u_n, &r.u_t, &r.theta, &r.jump_n_1, &r.jump_n_2, &r.sigma_n_1, &r.sigma_n_2};
    for (int k = 0; k < 8; ++k) *fields[k] = parse_double(cells[static_cast<std::size_t>(k + 1)], lineno);
    rows.push_back(r);
  }
  return rows;
}

std::vector<ProfileRow> read_profile_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_profile_csv(in);
}

void write_vtk(std::ostream& out, const Problem& problem, const PostProcessed& post, bool deformed) {
  std::size_t points = 0;
  std::size_t cells = 0;
  for (const auto& m : problem.meshes) {
    points += m.nodes.size();
    cells += m.triangles.size();
  }
  out << std::setprecision(17);
  out << "# vtk DataFile Version 3.0\n";
  out << "interface coupling solution\n";
  out << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << points << " double\n";
  for (std::size_t mi = 0; mi < problem.meshes.size(); ++mi) {
    for (std::size_t k = 0; k < problem.meshes[mi].nodes.size(); ++k) {
      const Vec2 p = deformed ? post.deformed[mi][k] : problem.meshes[mi].nodes[k];
      out << p.x() << ' ' << p.y() << " 0\n";
    }
  }
  out << "CELLS " << cells << ' ' << 4 * cells << '\n';
  std::size_t offset = 0;
  for (const auto& m : problem.meshes) {
    for (const auto& t : m.triangles) out << "3 " << offset + t[0] << ' ' << offset + t[1] << ' ' << offset + t[2] << '\n';
    offset += m.nodes.size();
  }
  out << "CELL_TYPES " << cells << '\n';
  for (std::size_t k = 0; k < cells; ++k) out << "5\n";

  out << "POINT_DATA " << points << '\n';
  out << "VECTORS displacement double\n";
  for (const auto& mesh_disp : post.displacement) {
    for (const auto& d : mesh_disp) out << d.x() << ' ' << d.y() << " 0\n";
  }
  out << "CELL_DATA " << cells << '\n';
  out << "SCALARS subdomain int 1\nLOOKUP_TABLE default\n";
  for (const auto& m : problem.meshes) {
    for (std::size_t k = 0; k < m.triangles.size(); ++k) out << m.subdomain_id << '\n';
  }
  out << "TENSORS stress double\n";
  for (const auto& mesh_stress : post.stress) {
    for (const auto& s : mesh_stress) {
      out << s.xx << ' ' << s.xy << " 0\n" << s.xy << ' ' << s.yy << " 0\n0 0 0\n";
    }
  }
}

void write_vtk(const std::filesystem::path& path, const Problem& problem, const PostProcessed& post, bool deformed) {
  auto out = open_output(path);
  write_vtk(out, problem, post, deformed);
  check_written(out, path);
}

void write_svg(std::ostream& out, const Problem& problem, const DofMap& dofs, const Solution& solution,
               const PostProcessed& post, double scale) {
  std::vector<std::vector<Vec2>> curves;
  for (std::size_t s = 0; s < problem.interface.segments.size(); ++s) {
    curves.push_back(deformed_segment(problem, dofs, solution.values, static_cast<int>(s), scale));
  }

  double xmin = std::numeric_limits<double>::max();
  double ymin = xmin;
  double xmax = -xmin;
  double ymax = -xmin;
  auto grow = [&](const Vec2& p) {
    xmin = std::min(xmin, p.x());
    xmax = std::max(xmax, p.x());
    ymin = std::min(ymin, p.y());
    ymax = std::max(ymax, p.y());
  };
  for (std::size_t mi = 0; mi < problem.meshes.size(); ++mi) {
    for (const auto& p : problem.meshes[mi].nodes) grow(p);
    for (const auto& p : post.deformed[mi]) grow(p);
  }
  for (const auto& c : curves) {
    for (const auto& p : c) grow(p);
  }
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-300});
  const double width = 800.0;
  const double pad = 20.0;
  const double k = (width - 2.0 * pad) / span;
  const double height = (ymax - ymin) * k + 2.0 * pad;
  auto px = [&](const Vec2& p) {
    std::ostringstream os;
    os << std::setprecision(7) << pad + (p.x() - xmin) * k << ',' << height - pad - (p.y() - ymin) * k;
    return os.str();
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<g id=\"undeformed\" fill=\"none\" stroke=\"#c8c8c8\" stroke-width=\"0.6\">\n";
  for (const auto& m : problem.meshes) {
    for (const auto& t : m.triangles) {
      out << "<polygon points=\"" << px(m.nodes[t[0]]) << ' ' << px(m.nodes[t[1]]) << ' ' << px(m.nodes[t[2]])
          << "\"/>\n";
    }
  }
  out << "</g>\n<g id=\"deformed\" fill=\"none\" stroke=\"#303030\" stroke-width=\"0.6\">\n";
  for (std::size_t mi = 0; mi < problem.meshes.size(); ++mi) {
    const auto& d = post.deformed[mi];
    for (const auto& t : problem.meshes[mi].triangles) {
      out << "<polygon points=\"" << px(d[t[0]]) << ' ' << px(d[t[1]]) << ' ' << px(d[t[2]]) << "\"/>\n";
    }
  }
  out << "</g>\n<g id=\"interface\" fill=\"none\" stroke=\"#b00000\" stroke-width=\"2\">\n";
  for (const auto& c : curves) {
    out << "<polyline points=\"";
    for (std::size_t i = 0; i < c.size(); ++i) out << (i ? " " : "") << px(c[i]);
    out << "\"/>\n";
  }
  out << "</g>\n</svg>\n";
}

void write_svg(const std::filesystem::path& path, const Problem& problem, const DofMap& dofs,
               const Solution& solution, const PostProcessed& post, double scale) {
  auto out = open_output(path);
  write_svg(out, problem, dofs, solution, post, scale);
  check_written(out, path);
}

}  // namespace nitsche
