#include "openmhd/field_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "openmhd/error.hpp"

namespace openmhd {

namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_header(std::ostream& os, const Grid& g, const std::string& name, double time, int components) {
  os << "# " << name << ' ' << g.nx() << ' ' << g.ny() << ' ' << fmt_double(g.hx()) << ' ' << fmt_double(g.hy()) << ' '
     << fmt_double(time) << ' ' << components << '\n';
}

void write_rows(std::ostream& os, const ScalarField& f) {
  for (int j = 0; j < f.nodes_y; ++j) {
    for (int i = 0; i < f.nodes_x; ++i) {
      if (i > 0) os << ' ';
      os << fmt_double(f(i, j));
    }
    os << '\n';
  }
}

}  // namespace

void write_field(std::ostream& os, const Grid& g, const std::string& name, double time, const ScalarField& f) {
  write_header(os, g, name, time, 1);
  write_rows(os, f);
}

void write_field(std::ostream& os, const Grid& g, const std::string& name, double time, const VectorField& v) {
  write_header(os, g, name, time, 3);
  for (const auto& c : v.c) write_rows(os, c);
}

void write_field_file(const std::string& path, const Grid& g, const std::string& name, double time, const ScalarField& f) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::InvalidArgument, "cannot open " + path + " for writing");
  write_field(os, g, name, time, f);
}

void write_field_file(const std::string& path, const Grid& g, const std::string& name, double time, const VectorField& v) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::InvalidArgument, "cannot open " + path + " for writing");
  write_field(os, g, name, time, v);
}

FieldDump read_field(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.size() < 2 || line[0] != '#')
    throw Error(ErrorCode::ParseError, "field dump must start with a '#' header line");
  std::istringstream header(line.substr(1));
  FieldDump d;
  int components = 0;
  if (!(header >> d.name >> d.nx >> d.ny >> d.hx >> d.hy >> d.time >> components) || components < 1)
    throw Error(ErrorCode::ParseError, "malformed field dump header: " + line);
  for (int c = 0; c < components; ++c) {
    ScalarField f;
    f.nodes_x = d.nx + 1;
    f.nodes_y = d.ny + 1;
    f.values.resize(static_cast<std::size_t>(f.nodes_x) * static_cast<std::size_t>(f.nodes_y));
    for (double& v : f.values)
      if (!(is >> v)) throw Error(ErrorCode::ParseError, "field dump truncated in component " + std::to_string(c));
    d.components.push_back(std::move(f));
  }
  return d;
}

}  // namespace openmhd
