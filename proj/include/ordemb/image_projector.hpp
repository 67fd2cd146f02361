#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ordemb/tensor.hpp"

namespace ordemb {

inline constexpr std::size_t kImageFeatureDim = 4096;

// Precomputed activations for one image. Extraction (and any crop averaging)
// happens upstream; this artifact only consumes the vectors.
struct ImageFeatures {
  std::string id;
  std::vector<double> values;  // exactly 4096, finite
};

void validate_features(const ImageFeatures& feat);

// The learned linear map W_i into the shared embedding cone.
struct ImageProjector {
  Tensor weight;  // [d x 4096]
  std::size_t embed_dim() const { return weight.extent(0); }
};

ImageProjector build_image_projector(std::size_t embed_dim, std::uint64_t seed);

// unit_normalize(|W_i . feat|): a d-long unit vector with non-negative
// coordinates.
Tensor embed_image(const ImageProjector& proj, const ImageFeatures& feat,
                   KernelTape& tape);

// Feature file, binary layout (little-endian):
//   magic "OAF1" | u32 record count | u32 dimensionality (4096)
//   per record: u32 id length | id bytes (UTF-8) | 4096 x float64
// Files that do not start with the magic are parsed as text instead:
// one record per line, id followed by 4096 decimal floats.
std::vector<ImageFeatures> load_features(const std::string& path);
void save_features(const std::string& path, const std::vector<ImageFeatures>& records);
void save_features_text(const std::string& path, const std::vector<ImageFeatures>& records);

inline constexpr char kFeatureMagic[5] = "OAF1";

}  // namespace ordemb
