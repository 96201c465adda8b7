#pragma once

#include <filesystem>
#include <iosfwd>

#include "semiflow/grid.hpp"

namespace semiflow {

// Field files are CSV. The first line carries `dim,n,period` (e.g. `1,256,2`);
// every following line is one node in row-major order holding one value for
// scalar fields and `dim` comma-separated values for vector fields. Values
// are written with 17 significant digits so they read back bit-exactly.

void write_field(std::ostream& os, const ScalarField& f);
void write_field(std::ostream& os, const VectorField& f);
ScalarField read_scalar_field(std::istream& is);
VectorField read_vector_field(std::istream& is);

void write_field(const std::filesystem::path& path, const ScalarField& f);
void write_field(const std::filesystem::path& path, const VectorField& f);
ScalarField read_scalar_field(const std::filesystem::path& path);
VectorField read_vector_field(const std::filesystem::path& path);

}  // namespace semiflow
