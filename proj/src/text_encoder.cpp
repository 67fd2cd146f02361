#include "ordemb/text_encoder.hpp"

#include <cmath>
#include <stdexcept>

#include "ordemb/rng.hpp"

namespace ordemb {

Arch parse_arch(const std::string& s) {
  if (s == "A" || s == "a") return Arch::A;
  if (s == "B" || s == "b") return Arch::B;
  if (s == "C" || s == "c") return Arch::C;
  if (s == "D" || s == "d") return Arch::D;
  throw std::invalid_argument("unknown architecture id: \"" + s + "\" (expected A, B, C or D)");
}

std::string arch_name(Arch a) {
  switch (a) {
    case Arch::A: return "A";
    case Arch::B: return "B";
    case Arch::C: return "C";
    case Arch::D: return "D";
  }
  throw std::invalid_argument("unknown architecture id");
}

std::vector<ConvLayerSpec> arch_layers(Arch a) {
  switch (a) {
    case Arch::A: return {{512, 7}};
    case Arch::B: return {{256, 7}, {512, 5}};
    case Arch::C: return {{128, 7}, {256, 5}, {512, 3}};
    case Arch::D: return {{512, 7}, {512, 5}, {512, 3}};
  }
  throw std::invalid_argument("unknown architecture id");
}

std::size_t maxout_layer_params(std::size_t prev_filters, std::size_t filters,
                                std::size_t filter_length) {
  return 2 * (prev_filters * filter_length * filters + filters);
}

std::vector<std::size_t> arch_layer_param_counts(Arch a) {
  std::vector<std::size_t> counts;
  std::size_t prev = kAlphabetSize;
  for (const auto& spec : arch_layers(a)) {
    counts.push_back(maxout_layer_params(prev, spec.filters, spec.filter_length));
    prev = spec.filters;
  }
  return counts;
}

namespace {

void fill_uniform_fan_in(Tensor& t, std::size_t fan_in, std::mt19937_64& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  for (double& v : t.values()) {
    v = uniform_in(rng, -bound, bound);
  }
}

}  // namespace

CttModel build_ctt(Arch arch, std::size_t embed_dim, std::uint64_t seed) {
  if (embed_dim < 1) {
    throw std::invalid_argument("embedding dimensionality must be >= 1");
  }
  CttModel model;
  model.arch = arch;
  model.embed_dim = embed_dim;
  std::mt19937_64 rng(seed);
  std::size_t prev = kAlphabetSize;
  for (const auto& spec : arch_layers(arch)) {
    MaxoutConvLayer layer;
    layer.w1 = Tensor({spec.filters, prev, spec.filter_length});
    layer.w2 = Tensor({spec.filters, prev, spec.filter_length});
    layer.b1 = Tensor({spec.filters});
    layer.b2 = Tensor({spec.filters});
    const std::size_t fan_in = prev * spec.filter_length;
    fill_uniform_fan_in(layer.w1, fan_in, rng);
    fill_uniform_fan_in(layer.w2, fan_in, rng);
    model.layers.push_back(std::move(layer));
    prev = spec.filters;
  }
  model.text_proj = Tensor({embed_dim, kTextVectorDim});
  fill_uniform_fan_in(model.text_proj, kTextVectorDim, rng);
  return model;
}

std::vector<Tensor> CttModel::parameters() const {
  std::vector<Tensor> out;
  for (const auto& l : layers) {
    out.push_back(l.w1);
    out.push_back(l.b1);
    out.push_back(l.w2);
    out.push_back(l.b2);
  }
  out.push_back(text_proj);
  return out;
}

std::vector<std::pair<std::string, Tensor>> CttModel::named_parameters() const {
  std::vector<std::pair<std::string, Tensor>> out;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const std::string p = "ctt.layer" + std::to_string(i) + ".";
    out.emplace_back(p + "w1", layers[i].w1);
    out.emplace_back(p + "b1", layers[i].b1);
    out.emplace_back(p + "w2", layers[i].w2);
    out.emplace_back(p + "b2", layers[i].b2);
  }
  out.emplace_back("ctt.text_proj", text_proj);
  return out;
}

std::size_t count_params(const CttModel& model, bool include_projection) {
  std::size_t total = 0;
  for (const auto& l : model.layers) {
    total += l.w1.size() + l.b1.size() + l.w2.size() + l.b2.size();
  }
  if (include_projection) {
    total += model.text_proj.size();
  }
  return total;
}

Tensor embed_text(const CttModel& model, const CharText& text, KernelTape& tape) {
  if (text.length < 1 || !text.onehot.defined()) {
    throw std::invalid_argument("embed_text needs at least one encoded character");
  }
  Tensor x = text.onehot;
  for (const auto& layer : model.layers) {
    Tensor a = conv1d_padded(tape, x, layer.w1, layer.b1);
    Tensor b = conv1d_padded(tape, x, layer.w2, layer.b2);
    x = maxout2(tape, a, b);
  }
  Tensor pooled = maxpool_over_time(tape, x);
  Tensor projected = linear(tape, pooled, model.text_proj);
  Tensor rectified = abs_elementwise(tape, projected);
  return unit_normalize(tape, rectified);
}

}  // namespace ordemb
