#include "ordemb/image_projector.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "ordemb/rng.hpp"
#include "ordemb/serialize.hpp"

namespace ordemb {

void validate_features(const ImageFeatures& feat) {
  if (feat.values.size() != kImageFeatureDim) {
    throw std::invalid_argument("image \"" + feat.id + "\" has " +
                                std::to_string(feat.values.size()) +
                                " feature values, expected " +
                                std::to_string(kImageFeatureDim));
  }
  for (double v : feat.values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("image \"" + feat.id + "\" has a non-finite feature value");
    }
  }
}

ImageProjector build_image_projector(std::size_t embed_dim, std::uint64_t seed) {
  if (embed_dim < 1) {
    throw std::invalid_argument("embedding dimensionality must be >= 1");
  }
  ImageProjector proj;
  proj.weight = Tensor({embed_dim, kImageFeatureDim});
  std::mt19937_64 rng(seed);
  const double bound = 1.0 / std::sqrt(static_cast<double>(kImageFeatureDim));
  for (double& v : proj.weight.values()) {
    v = uniform_in(rng, -bound, bound);
  }
  return proj;
}

Tensor embed_image(const ImageProjector& proj, const ImageFeatures& feat,
                   KernelTape& tape) {
  validate_features(feat);
  Tensor input({kImageFeatureDim}, feat.values);
  Tensor projected = linear(tape, input, proj.weight);
  Tensor rectified = abs_elementwise(tape, projected);
  return unit_normalize(tape, rectified);
}

namespace {

std::vector<ImageFeatures> load_features_binary(std::istream& in, const std::string& path) {
  const std::uint32_t count = read_u32(in);
  const std::uint32_t dim = read_u32(in);
  if (dim != kImageFeatureDim) {
    throw std::runtime_error(path + ": feature dimensionality " + std::to_string(dim) +
                             " != " + std::to_string(kImageFeatureDim));
  }
  std::vector<ImageFeatures> records;
  records.reserve(count);
  std::unordered_set<std::string> seen;
  for (std::uint32_t r = 0; r < count; ++r) {
    ImageFeatures feat;
    try {
      feat.id = read_string(in);
      read_f64_array(in, feat.values, dim);
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ": record " + std::to_string(r) + ": " + e.what());
    }
    if (!seen.insert(feat.id).second) {
      throw std::runtime_error(path + ": record " + std::to_string(r) +
                               ": duplicate image id \"" + feat.id + "\"");
    }
    try {
      validate_features(feat);
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ": record " + std::to_string(r) + ": " + e.what());
    }
    records.push_back(std::move(feat));
  }
  return records;
}

std::vector<ImageFeatures> load_features_text(std::istream& in, const std::string& path) {
  std::vector<ImageFeatures> records;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    ImageFeatures feat;
    if (!(ls >> feat.id)) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": missing image id");
    }
    double v;
    while (ls >> v) feat.values.push_back(v);
    if (!ls.eof()) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed float");
    }
    if (!seen.insert(feat.id).second) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": duplicate image id \"" + feat.id + "\"");
    }
    try {
      validate_features(feat);
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    records.push_back(std::move(feat));
  }
  return records;
}

}  // namespace

std::vector<ImageFeatures> load_features(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open feature file: " + path);
  }
  char magic[4] = {0, 0, 0, 0};
  in.read(magic, 4);
  if (in.gcount() == 4 && std::memcmp(magic, kFeatureMagic, 4) == 0) {
    return load_features_binary(in, path);
  }
  in.clear();
  in.seekg(0);
  return load_features_text(in, path);
}

void save_features(const std::string& path, const std::vector<ImageFeatures>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write feature file: " + path);
  }
  out.write(kFeatureMagic, 4);
  write_u32(out, static_cast<std::uint32_t>(records.size()));
  write_u32(out, static_cast<std::uint32_t>(kImageFeatureDim));
  for (const auto& feat : records) {
    validate_features(feat);
    write_string(out, feat.id);
    write_f64_array(out, feat.values);
  }
  if (!out) {
    throw std::runtime_error("failed writing feature file: " + path);
  }
}

void save_features_text(const std::string& path, const std::vector<ImageFeatures>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write feature file: " + path);
  }
  out.precision(17);
  for (const auto& feat : records) {
    validate_features(feat);
    out << feat.id;
    for (double v : feat.values) out << ' ' << v;
    out << '\n';
  }
}

}  // namespace ordemb
