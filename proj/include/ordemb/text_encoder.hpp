#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ordemb/alphabet.hpp"
#include "ordemb/tensor.hpp"

namespace ordemb {

// The four published layer configurations. Every variant ends in a 512-filter
// layer so the pooled text vector is always 512-long.
enum class Arch { A, B, C, D };

Arch parse_arch(const std::string& s);  // "A".."D", case-insensitive
std::string arch_name(Arch a);

struct ConvLayerSpec {
  std::size_t filters;
  std::size_t filter_length;
};

// A: 512x7
// B: 256x7, 512x5
// C: 128x7, 256x5, 512x3
// D: 512x7, 512x5, 512x3
std::vector<ConvLayerSpec> arch_layers(Arch a);

inline constexpr std::size_t kTextVectorDim = 512;

// One maxout convolution layer: two parallel filter banks combined by
// elementwise max, which doubles the parameter count of the layer.
struct MaxoutConvLayer {
  Tensor w1, w2;  // [filters x prev_filters x length]
  Tensor b1, b2;  // [filters]
};

struct CttModel {
  Arch arch = Arch::A;
  std::size_t embed_dim = 0;  // d
  std::vector<MaxoutConvLayer> layers;
  Tensor text_proj;  // W_t [d x 512]

  std::vector<Tensor> parameters() const;
  std::vector<std::pair<std::string, Tensor>> named_parameters() const;
};

// Parameters of one maxout conv layer: 2 * (prev_filters * length * filters + filters).
std::size_t maxout_layer_params(std::size_t prev_filters, std::size_t filters,
                                std::size_t filter_length);

// Per-layer counts for an architecture, first layer fed by the 72-wide input.
std::vector<std::size_t> arch_layer_param_counts(Arch a);

// Weights uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)], biases zero;
// deterministic for a fixed seed.
CttModel build_ctt(Arch arch, std::size_t embed_dim, std::uint64_t seed);

std::size_t count_params(const CttModel& model, bool include_projection);

// conv pair + maxout per layer, max-pool over time, W_t projection, |.|,
// unit norm. Output is a d-long unit vector with non-negative coordinates.
Tensor embed_text(const CttModel& model, const CharText& text, KernelTape& tape);

}  // namespace ordemb
