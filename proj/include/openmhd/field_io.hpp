#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "openmhd/field.hpp"

namespace openmhd {

/// A field as stored on disk: header metadata plus one ScalarField per component.
struct FieldDump {
  std::string name;
  int nx = 0;
  int ny = 0;
  double hx = 0.0;
  double hy = 0.0;
  double time = 0.0;
  std::vector<ScalarField> components;
};

// Text format, see docs/formats.md:
//   # <name> <nx> <ny> <hx> <hy> <time> <components>
// followed by, for each component in order, ny+1 lines (j = 0..ny) of nx+1
// space-separated values (i = 0..nx). Numbers are printed with %.17g.
void write_field(std::ostream& os, const Grid& g, const std::string& name, double time, const ScalarField& f);
void write_field(std::ostream& os, const Grid& g, const std::string& name, double time, const VectorField& v);
void write_field_file(const std::string& path, const Grid& g, const std::string& name, double time, const ScalarField& f);
void write_field_file(const std::string& path, const Grid& g, const std::string& name, double time, const VectorField& v);
FieldDump read_field(std::istream& is);

}  // namespace openmhd
