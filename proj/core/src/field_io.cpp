#include "boomprop/field_io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <vector>

#include "boomprop/error.hpp"

namespace boomprop {
namespace {

template <typename T>
void put_le(std::vector<char>& out, T value) {
  static_assert(sizeof(T) == 8);
  std::uint64_t bits = 0;
  std::memcpy(&bits, &value, 8);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xffu));
}

template <typename T>
T get_le(const char* in) {
  static_assert(sizeof(T) == 8);
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) {
    bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[i])) << (8 * i);
  }
  T value;
  std::memcpy(&value, &bits, 8);
  return value;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const Field2D& field,
                    const FieldGeometry& geometry, double sigma) {
  std::vector<char> bytes;
  bytes.reserve(kSnapshotHeaderBytes + 8 * field.size());
  bytes.insert(bytes.end(), std::begin(kSnapshotMagic), std::end(kSnapshotMagic));
  put_le<std::uint64_t>(bytes, kSnapshotVersion);
  put_le<std::uint64_t>(bytes, field.rows());
  put_le<std::uint64_t>(bytes, field.cols());
  put_le(bytes, geometry.rho0);
  put_le(bytes, geometry.theta0);
  put_le(bytes, geometry.d_rho);
  put_le(bytes, geometry.d_theta);
  put_le(bytes, sigma);
  if constexpr (std::endian::native == std::endian::little) {
    const auto* raw = reinterpret_cast<const char*>(field.data());
    bytes.insert(bytes.end(), raw, raw + 8 * field.size());
  } else {
    for (double v : field.values()) put_le(bytes, v);
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<char> header(kSnapshotHeaderBytes);
  in.read(header.data(), static_cast<std::streamsize>(header.size()));
  if (!in || !std::equal(std::begin(kSnapshotMagic), std::end(kSnapshotMagic), header.begin())) {
    throw IoError("not a field snapshot: " + path.string());
  }
  Snapshot snap;
  snap.header.version = get_le<std::uint64_t>(&header[8]);
  if (snap.header.version != kSnapshotVersion) {
    throw IoError("unsupported snapshot version in " + path.string());
  }
  snap.header.rows = get_le<std::uint64_t>(&header[16]);
  snap.header.cols = get_le<std::uint64_t>(&header[24]);
  snap.header.geometry.rho0 = get_le<double>(&header[32]);
  snap.header.geometry.theta0 = get_le<double>(&header[40]);
  snap.header.geometry.d_rho = get_le<double>(&header[48]);
  snap.header.geometry.d_theta = get_le<double>(&header[56]);
  snap.header.sigma = get_le<double>(&header[64]);

  snap.field = Field2D(snap.header.rows, snap.header.cols);
  std::vector<char> body(8 * snap.field.size());
  in.read(body.data(), static_cast<std::streamsize>(body.size()));
  if (!in) throw IoError("truncated snapshot: " + path.string());
  auto values = snap.field.values();
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = get_le<double>(&body[8 * i]);
  return snap;
}

void write_field_csv(const std::filesystem::path& path, const Field2D& field,
                     const FieldGeometry& geometry) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "rho,theta,V\n" << std::setprecision(17);
  for (std::size_t j = 0; j < field.rows(); ++j) {
    const double rho = geometry.rho0 + j * geometry.d_rho;
    for (std::size_t k = 0; k < field.cols(); ++k) {
      out << rho << ',' << geometry.theta0 + k * geometry.d_theta << ',' << field(j, k) << '\n';
    }
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace boomprop
