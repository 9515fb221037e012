#pragma once

#include <string>

#include "bdreg/core/volume.hpp"

namespace bdreg {

/// Volume/field file I/O. Two formats, chosen by extension:
///
///   *.json  RAW: a UTF-8 JSON sidecar header
///             {"dims":[nx,ny,nz],"spacing":[sx,sy,sz],"origin":[ox,oy,oz],
///              "dtype":"f32le","order":"x-fastest","components":1|3}
///           plus a binary payload next to it (same stem, .raw extension) of
///           little-endian 32-bit floats. 3-component fields store the ux
///           block, then uy, then uz.
///
///   *.nii   NIfTI-1, single file, float32, no scaling slope. Fields are
///           written as dim[0]=5, dim[5]=3, intent code 1007 (vector), which
///           lays the payload out identically to the RAW component blocks.
///
/// Reads validate the header against the payload (dims/size mismatch,
/// unsupported dtype or format code) and reject non-finite values.
Volume3 read_volume(const std::string &path);
void write_volume(const Volume3 &vol, const std::string &path);

VectorField3 read_field(const std::string &path);
void write_field(const VectorField3 &field, const std::string &path);

} // namespace bdreg
