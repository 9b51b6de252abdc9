#pragma once

#include <cstdint>
#include <filesystem>

#include "boomprop/field.hpp"

namespace boomprop {

/// Header of the binary snapshot format. All fields little-endian:
///
///   offset  size  content
///   0       8     magic "BPFIELD\0"
///   8       8     u64 format version (1)
///   16      8     u64 rows (n_rho)
///   24      8     u64 cols (n_theta)
///   32      8     f64 rho0
///   40      8     f64 theta0
///   48      8     f64 d_rho
///   56      8     f64 d_theta
///   64      8     f64 sigma
///   72      ...   rows*cols f64 values, row-major
struct SnapshotHeader {
  std::uint64_t version = 1;
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  FieldGeometry geometry;
  double sigma = 0.0;
};

inline constexpr char kSnapshotMagic[8] = {'B', 'P', 'F', 'I', 'E', 'L', 'D', '\0'};
inline constexpr std::uint64_t kSnapshotVersion = 1;
inline constexpr std::size_t kSnapshotHeaderBytes = 72;

struct Snapshot {
  SnapshotHeader header;
  Field2D field;
};

void write_snapshot(const std::filesystem::path& path, const Field2D& field,
                    const FieldGeometry& geometry, double sigma);
Snapshot read_snapshot(const std::filesystem::path& path);

/// "rho,theta,V" rows in storage order, full double precision.
void write_field_csv(const std::filesystem::path& path, const Field2D& field,
                     const FieldGeometry& geometry);

}  // namespace boomprop
