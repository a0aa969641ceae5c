#include "etdrdp/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace etdrdp {
namespace {

std::uint64_t byteswap64(std::uint64_t v) {
  std::uint64_t r = 0;
  for (int i = 0; i < 8; ++i) r = (r << 8) | ((v >> (8 * i)) & 0xffu);
  return r;
}

void to_little_endian(std::vector<double>& values) {
  if constexpr (std::endian::native == std::endian::big) {
    for (double& x : values) {
      std::uint64_t bits;
      std::memcpy(&bits, &x, 8);
      bits = byteswap64(bits);
      std::memcpy(&x, &bits, 8);
    }
  }
}

}  // namespace

std::string FieldHeader::str() const {
  std::ostringstream os;
  os << "ETDRDP v1 d=" << dim << " p=" << points << " s=" << components << " complex=" << (complex ? 1 : 0)
     << " bc=" << boundary_code(bc);
  return os.str();
}

FieldHeader FieldHeader::parse(const std::string& line) {
  std::istringstream is(line);
  std::string magic, version;
  is >> magic >> version;
  if (magic != "ETDRDP" || version != "v1") throw InvalidArgument("field header: bad magic '" + line + "'");
  FieldHeader h;
  bool seen[5] = {false, false, false, false, false};
  std::string tok;
  while (is >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw InvalidArgument("field header: bad token '" + tok + "'");
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    try {
      if (key == "d") {
        h.dim = std::stoi(val);
        seen[0] = true;
      } else if (key == "p") {
        h.points = std::stoll(val);
        seen[1] = true;
      } else if (key == "s") {
        h.components = std::stoll(val);
        seen[2] = true;
      } else if (key == "complex") {
        if (val != "0" && val != "1") throw InvalidArgument("field header: complex must be 0 or 1");
        h.complex = val == "1";
        seen[3] = true;
      } else if (key == "bc") {
        if (val.size() != 1) throw InvalidArgument("field header: bc must be D, N or P");
        h.bc = parse_boundary(val);
        seen[4] = true;
      } else {
        throw InvalidArgument("field header: unknown key '" + key + "'");
      }
    } catch (const std::logic_error& e) {
      if (dynamic_cast<const InvalidArgument*>(&e)) throw;
      throw InvalidArgument("field header: bad value in '" + tok + "'");
    }
  }
  for (bool s : seen) {
    if (!s) throw InvalidArgument("field header: missing key in '" + line + "'");
  }
  if (h.dim < 1 || h.dim > 3 || h.points < 1 || h.components < 1) {
    throw InvalidArgument("field header: shape out of range");
  }
  return h;
}

Index FieldHeader::values() const {
  Index n = components * (complex ? 2 : 1);
  for (int a = 0; a < dim; ++a) n *= points;
  return n;
}

FieldHeader field_header(const GridSpec& grid, bool complex) {
  FieldHeader h;
  h.dim = grid.dim;
  h.points = grid.points;
  h.components = grid.components;
  h.complex = complex;
  h.bc = grid.bc;
  return h;
}

namespace detail {

void write_field_raw(const FieldHeader& header, const double* data, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  const std::string line = header.str() + "\n";
  os.write(line.data(), static_cast<std::streamsize>(line.size()));
  std::vector<double> payload(data, data + header.values());
  to_little_endian(payload);
  os.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size() * 8));
  if (!os) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::vector<double> read_field_raw(const std::filesystem::path& path, FieldHeader& header) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(is, line)) throw InvalidArgument("field file is empty");
  header = FieldHeader::parse(line);
  std::vector<double> payload(static_cast<std::size_t>(header.values()));
  const auto bytes = static_cast<std::streamsize>(payload.size() * 8);
  is.read(reinterpret_cast<char*>(payload.data()), bytes);
  if (is.gcount() != bytes) throw InvalidArgument("field file payload is truncated");
  if (is.peek() != std::char_traits<char>::eof()) throw InvalidArgument("field file has trailing bytes");
  to_little_endian(payload);
  return payload;
}

}  // namespace detail

template <typename Scalar>
void write_field_csv(const StateVector<Scalar>& state, const GridSpec& grid, const std::filesystem::path& path) {
  if (state.size() != grid.size()) throw InvalidArgument("write_field_csv: state does not match the grid");
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  os << "# " << field_header(grid, is_complex_v<Scalar>).str() << "\n";
  static const char* axes[] = {"x", "y", "z"};
  for (int a = 0; a < grid.dim; ++a) os << axes[a] << ",";
  os << "component,re,im\n" << std::setprecision(17);
  const Index s = grid.components;
  for (Index n = 0; n < grid.nodes(); ++n) {
    const auto x = grid.node_coordinates(n);
    for (Index c = 0; c < s; ++c) {
      for (int a = 0; a < grid.dim; ++a) os << x[static_cast<std::size_t>(a)] << ",";
      const Complex v(state[n * s + c]);
      os << c << "," << v.real() << "," << v.imag() << "\n";
    }
  }
}

template void write_field_csv<double>(const StateVector<double>&, const GridSpec&, const std::filesystem::path&);
template void write_field_csv<Complex>(const StateVector<Complex>&, const GridSpec&, const std::filesystem::path&);

}  // namespace etdrdp
