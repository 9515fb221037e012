#include "bdreg/core/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

static_assert(std::endian::native == std::endian::little,
              "file formats are little-endian; big-endian hosts are not supported");

namespace bdreg {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

// NIfTI-1 header, single-file (.nii) variant. Field offsets per the
// standard; total size must be 348 bytes.
#pragma pack(push, 1)
struct Nifti1Header {
  std::int32_t sizeof_hdr = 348;
  char data_type[10] = {};
  char db_name[18] = {};
  std::int32_t extents = 0;
  std::int16_t session_error = 0;
  char regular = 'r';
  char dim_info = 0;
  std::int16_t dim[8] = {};
  float intent_p1 = 0, intent_p2 = 0, intent_p3 = 0;
  std::int16_t intent_code = 0;
  std::int16_t datatype = 0;
  std::int16_t bitpix = 0;
  std::int16_t slice_start = 0;
  float pixdim[8] = {};
  float vox_offset = 352.0f;
  float scl_slope = 0;
  float scl_inter = 0;
  std::int16_t slice_end = 0;
  char slice_code = 0;
  char xyzt_units = 2; // mm
  float cal_max = 0, cal_min = 0;
  float slice_duration = 0, toffset = 0;
  std::int32_t glmax = 0, glmin = 0;
  char descrip[80] = {};
  char aux_file[24] = {};
  std::int16_t qform_code = 0;
  std::int16_t sform_code = 0;
  float quatern_b = 0, quatern_c = 0, quatern_d = 0;
  float qoffset_x = 0, qoffset_y = 0, qoffset_z = 0;
  float srow_x[4] = {};
  float srow_y[4] = {};
  float srow_z[4] = {};
  char intent_name[16] = {};
  char magic[4] = {};
};
#pragma pack(pop)
static_assert(sizeof(Nifti1Header) == 348, "NIfTI-1 header must be 348 bytes");

constexpr std::int16_t kNiftiFloat32 = 16;
constexpr std::int16_t kNiftiIntentVector = 1007;

enum class Format { raw_json, nifti };

Format format_from_path(const fs::path &path) {
  const std::string ext = path.extension().string();
  if (ext == ".json")
    return Format::raw_json;
  if (ext == ".nii")
    return Format::nifti;
  throw std::runtime_error("unsupported volume format for '" + path.string() +
                           "' (expected .json sidecar or .nii)");
}

fs::path raw_payload_path(const fs::path &header_path) {
  fs::path p = header_path;
  p.replace_extension(".raw");
  return p;
}

void write_bytes(const fs::path &path, const void *data, std::size_t bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out.write(static_cast<const char *>(data), static_cast<std::streamsize>(bytes));
  if (!out)
    throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::vector<float> read_floats(const fs::path &path, std::size_t expected_count) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in)
    throw std::runtime_error("cannot open payload '" + path.string() + "'");
  const auto bytes = static_cast<std::size_t>(in.tellg());
  if (bytes != expected_count * sizeof(float))
    throw std::runtime_error("payload size mismatch for '" + path.string() + "': header implies " +
                             std::to_string(expected_count * sizeof(float)) + " bytes, file has " +
                             std::to_string(bytes));
  std::vector<float> data(expected_count);
  in.seekg(0);
  in.read(reinterpret_cast<char *>(data.data()), static_cast<std::streamsize>(bytes));
  if (!in)
    throw std::runtime_error("read failed for '" + path.string() + "'");
  return data;
}

void write_raw(const Grid3 &grid, const std::vector<const std::vector<float> *> &components,
               const fs::path &path) {
  ordered_json header;
  header["dims"] = grid.dims;
  header["spacing"] = grid.spacing;
  header["origin"] = grid.origin;
  header["dtype"] = "f32le";
  header["order"] = "x-fastest";
  header["components"] = components.size();
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << header.dump(2) << "\n";
  if (!out)
    throw std::runtime_error("write failed for '" + path.string() + "'");

  std::vector<float> payload;
  payload.reserve(grid.voxel_count() * components.size());
  for (const auto *comp : components)
    payload.insert(payload.end(), comp->begin(), comp->end());
  write_bytes(raw_payload_path(path), payload.data(), payload.size() * sizeof(float));
}

struct RawFile {
  Grid3 grid;
  int components = 0;
  std::vector<float> payload; // component blocks, concatenated
};

RawFile read_raw(const fs::path &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open header '" + path.string() + "'");
  nlohmann::json header;
  try {
    in >> header;
  } catch (const nlohmann::json::exception &e) {
    throw std::runtime_error("malformed header '" + path.string() + "': " + e.what());
  }

  RawFile raw;
  try {
    const auto dims = header.at("dims").get<std::vector<int>>();
    const auto spacing = header.at("spacing").get<std::vector<double>>();
    const auto origin = header.at("origin").get<std::vector<double>>();
    if (dims.size() != 3 || spacing.size() != 3 || origin.size() != 3)
      throw std::runtime_error("malformed header '" + path.string() +
                               "': dims/spacing/origin must have 3 entries");
    for (int a = 0; a < 3; ++a) {
      raw.grid.dims[a] = dims[a];
      raw.grid.spacing[a] = spacing[a];
      raw.grid.origin[a] = origin[a];
    }
    if (header.at("dtype").get<std::string>() != "f32le")
      throw std::runtime_error("unsupported dtype in '" + path.string() + "' (expected f32le)");
    if (header.at("order").get<std::string>() != "x-fastest")
      throw std::runtime_error("unsupported order in '" + path.string() +
                               "' (expected x-fastest)");
    raw.components = header.at("components").get<int>();
  } catch (const nlohmann::json::exception &e) {
    throw std::runtime_error("malformed header '" + path.string() + "': " + e.what());
  }
  if (raw.components != 1 && raw.components != 3)
    throw std::runtime_error("unsupported components=" + std::to_string(raw.components) + " in '" +
                             path.string() + "'");
  validate_grid(raw.grid);
  raw.payload =
      read_floats(raw_payload_path(path), raw.grid.voxel_count() * raw.components);
  return raw;
}

void fill_geometry(Nifti1Header &h, const Grid3 &grid) {
  h.pixdim[0] = 1.0f;
  for (int a = 0; a < 3; ++a)
    h.pixdim[a + 1] = static_cast<float>(grid.spacing[a]);
  h.sform_code = 1;
  h.srow_x[0] = static_cast<float>(grid.spacing[0]);
  h.srow_y[1] = static_cast<float>(grid.spacing[1]);
  h.srow_z[2] = static_cast<float>(grid.spacing[2]);
  h.srow_x[3] = static_cast<float>(grid.origin[0]);
  h.srow_y[3] = static_cast<float>(grid.origin[1]);
  h.srow_z[3] = static_cast<float>(grid.origin[2]);
}

void write_nifti(const Grid3 &grid, const std::vector<const std::vector<float> *> &components,
                 const fs::path &path) {
  Nifti1Header h;
  std::memcpy(h.magic, "n+1", 4);
  h.datatype = kNiftiFloat32;
  h.bitpix = 32;
  if (components.size() == 1) {
    h.dim[0] = 3;
    h.dim[1] = static_cast<std::int16_t>(grid.dims[0]);
    h.dim[2] = static_cast<std::int16_t>(grid.dims[1]);
    h.dim[3] = static_cast<std::int16_t>(grid.dims[2]);
    h.dim[4] = h.dim[5] = h.dim[6] = h.dim[7] = 1;
  } else {
    h.dim[0] = 5;
    h.dim[1] = static_cast<std::int16_t>(grid.dims[0]);
    h.dim[2] = static_cast<std::int16_t>(grid.dims[1]);
    h.dim[3] = static_cast<std::int16_t>(grid.dims[2]);
    h.dim[4] = 1;
    h.dim[5] = 3;
    h.dim[6] = h.dim[7] = 1;
    h.intent_code = kNiftiIntentVector;
  }
  fill_geometry(h, grid);

  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char *>(&h), sizeof(h));
  const char extender[4] = {0, 0, 0, 0};
  out.write(extender, 4);
  for (const auto *comp : components)
    out.write(reinterpret_cast<const char *>(comp->data()),
              static_cast<std::streamsize>(comp->size() * sizeof(float)));
  if (!out)
    throw std::runtime_error("write failed for '" + path.string() + "'");
}

struct NiftiFile {
  Grid3 grid;
  int components = 0;
  std::vector<float> payload;
};

NiftiFile read_nifti(const fs::path &path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in)
    throw std::runtime_error("cannot open '" + path.string() + "'");
  const auto file_bytes = static_cast<std::size_t>(in.tellg());
  if (file_bytes < sizeof(Nifti1Header))
    throw std::runtime_error("malformed NIfTI '" + path.string() + "': truncated header");
  in.seekg(0);
  Nifti1Header h;
  in.read(reinterpret_cast<char *>(&h), sizeof(h));
  if (h.sizeof_hdr != 348)
    throw std::runtime_error("unsupported NIfTI '" + path.string() +
                             "': sizeof_hdr != 348 (byte-swapped or NIfTI-2 input?)");
  if (std::memcmp(h.magic, "n+1", 3) != 0)
    throw std::runtime_error("unsupported NIfTI '" + path.string() +
                             "': only single-file n+1 magic is handled");
  if (h.datatype != kNiftiFloat32)
    throw std::runtime_error("unsupported NIfTI datatype " + std::to_string(h.datatype) + " in '" +
                             path.string() + "' (expected float32)");
  if (!(h.scl_slope == 0.0f || (h.scl_slope == 1.0f && h.scl_inter == 0.0f)))
    throw std::runtime_error("unsupported NIfTI '" + path.string() + "': scaling slope set");

  NiftiFile nf;
  if (h.dim[0] == 3) {
    nf.components = 1;
  } else if (h.dim[0] == 5 && h.dim[4] == 1 && h.dim[5] == 3) {
    nf.components = 3;
  } else {
    throw std::runtime_error("unsupported NIfTI dim[] layout in '" + path.string() + "'");
  }
  for (int a = 0; a < 3; ++a) {
    nf.grid.dims[a] = h.dim[a + 1];
    nf.grid.spacing[a] = h.pixdim[a + 1];
  }
  if (h.sform_code > 0) {
    const float off[6] = {h.srow_x[1], h.srow_x[2], h.srow_y[0],
                          h.srow_y[2], h.srow_z[0], h.srow_z[1]};
    for (float v : off)
      if (std::abs(v) > 1e-5f)
        throw std::runtime_error("unsupported NIfTI '" + path.string() +
                                 "': non-axis-aligned sform");
    if (h.srow_x[0] <= 0 || h.srow_y[1] <= 0 || h.srow_z[2] <= 0)
      throw std::runtime_error("unsupported NIfTI '" + path.string() + "': flipped sform axes");
    nf.grid.spacing[0] = h.srow_x[0];
    nf.grid.spacing[1] = h.srow_y[1];
    nf.grid.spacing[2] = h.srow_z[2];
    nf.grid.origin[0] = h.srow_x[3];
    nf.grid.origin[1] = h.srow_y[3];
    nf.grid.origin[2] = h.srow_z[3];
  } else if (h.qform_code > 0) {
    if (h.quatern_b != 0.0f || h.quatern_c != 0.0f || h.quatern_d != 0.0f)
      throw std::runtime_error("unsupported NIfTI '" + path.string() + "': rotated qform");
    nf.grid.origin[0] = h.qoffset_x;
    nf.grid.origin[1] = h.qoffset_y;
    nf.grid.origin[2] = h.qoffset_z;
  }
  validate_grid(nf.grid);

  const std::size_t count = nf.grid.voxel_count() * nf.components;
  const auto offset = static_cast<std::size_t>(h.vox_offset);
  if (file_bytes != offset + count * sizeof(float))
    throw std::runtime_error("payload size mismatch for '" + path.string() + "': expected " +
                             std::to_string(offset + count * sizeof(float)) + " bytes, file has " +
                             std::to_string(file_bytes));
  nf.payload.resize(count);
  in.seekg(static_cast<std::streamoff>(offset));
  in.read(reinterpret_cast<char *>(nf.payload.data()),
          static_cast<std::streamsize>(count * sizeof(float)));
  if (!in)
    throw std::runtime_error("read failed for '" + path.string() + "'");
  return nf;
}

} // namespace

Volume3 read_volume(const std::string &path) {
  const fs::path p(path);
  Grid3 grid;
  int components = 0;
  std::vector<float> payload;
  if (format_from_path(p) == Format::raw_json) {
    RawFile raw = read_raw(p);
    grid = raw.grid;
    components = raw.components;
    payload = std::move(raw.payload);
  } else {
    NiftiFile nf = read_nifti(p);
    grid = nf.grid;
    components = nf.components;
    payload = std::move(nf.payload);
  }
  if (components != 1)
    throw std::runtime_error("'" + path + "' holds a 3-component field, not a volume");
  return make_volume(grid, std::move(payload));
}

void write_volume(const Volume3 &vol, const std::string &path) {
  const fs::path p(path);
  if (format_from_path(p) == Format::raw_json)
    write_raw(vol.grid, {&vol.data}, p);
  else
    write_nifti(vol.grid, {&vol.data}, p);
}

VectorField3 read_field(const std::string &path) {
  const fs::path p(path);
  Grid3 grid;
  int components = 0;
  std::vector<float> payload;
  if (format_from_path(p) == Format::raw_json) {
    RawFile raw = read_raw(p);
    grid = raw.grid;
    components = raw.components;
    payload = std::move(raw.payload);
  } else {
    NiftiFile nf = read_nifti(p);
    grid = nf.grid;
    components = nf.components;
    payload = std::move(nf.payload);
  }
  if (components != 3)
    throw std::runtime_error("'" + path + "' holds a scalar volume, not a field");
  const std::size_t n = grid.voxel_count();
  std::vector<float> ux(payload.begin(), payload.begin() + n);
  std::vector<float> uy(payload.begin() + n, payload.begin() + 2 * n);
  std::vector<float> uz(payload.begin() + 2 * n, payload.end());
  return make_field(grid, std::move(ux), std::move(uy), std::move(uz));
}

void write_field(const VectorField3 &field, const std::string &path) {
  const fs::path p(path);
  if (format_from_path(p) == Format::raw_json)
    write_raw(field.grid, {&field.ux, &field.uy, &field.uz}, p);
  else
    write_nifti(field.grid, {&field.ux, &field.uy, &field.uz}, p);
}

} // namespace bdreg
