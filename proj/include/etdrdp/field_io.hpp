#pragma once

#include "etdrdp/grid.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace etdrdp {

/// Shape recorded in the first line of a field file.
struct FieldHeader {
  int dim = 1;
  Index points = 3;
  Index components = 1;
  bool complex = false;
  Boundary bc = Boundary::Dirichlet;

  /// `ETDRDP v1 d=<d> p=<p> s=<s> complex=<0|1> bc=<D|N|P>` without the newline.
  std::string str() const;
  static FieldHeader parse(const std::string& line);
  /// Number of doubles in the payload.
  Index values() const;
};

FieldHeader field_header(const GridSpec& grid, bool complex);

namespace detail {
void write_field_raw(const FieldHeader& header, const double* data, const std::filesystem::path& path);
std::vector<double> read_field_raw(const std::filesystem::path& path, FieldHeader& header);
}  // namespace detail

/// Header line followed by little-endian doubles, real/imag interleaved for complex states.
template <typename Scalar>
void write_field(const StateVector<Scalar>& state, const GridSpec& grid, const std::filesystem::path& path) {
  if (state.size() != grid.size()) throw InvalidArgument("write_field: state does not match the grid");
  // std::complex<double> is layout-compatible with double[2].
  detail::write_field_raw(field_header(grid, is_complex_v<Scalar>), reinterpret_cast<const double*>(state.data()),
                          path);
}

/// Reads a field written by write_field. `header` receives the stored shape when given.
/// Throws InvalidArgument on a malformed header, a real/complex mismatch or a truncated payload.
template <typename Scalar>
StateVector<Scalar> read_field(const std::filesystem::path& path, FieldHeader* header = nullptr) {
  FieldHeader h;
  const std::vector<double> raw = detail::read_field_raw(path, h);
  if (h.complex != is_complex_v<Scalar>) throw InvalidArgument("read_field: real/complex mismatch");
  StateVector<Scalar> out(h.values() / (h.complex ? 2 : 1));
  std::copy(raw.begin(), raw.end(), reinterpret_cast<double*>(out.data()));
  if (header) *header = h;
  return out;
}

/// One row per node and component: coordinates, component, re, im.
template <typename Scalar>
void write_field_csv(const StateVector<Scalar>& state, const GridSpec& grid, const std::filesystem::path& path);

}  // namespace etdrdp
