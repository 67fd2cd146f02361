#pragma once

#include <span>
#include <vector>

#include "ordemb/tensor.hpp"

namespace ordemb {

// Order-violation penalty s(x, y) = -|| max{0, y - x} ||^2.
// Always <= 0; equals 0 exactly when y <= x coordinate-wise. Asymmetric on
// purpose: it scores how far y sits above x in the embedding cone.
double order_penalty(std::span<const double> x, std::span<const double> y);
double order_penalty(const Tensor& x, const Tensor& y);

struct LossConfig {
  double margin = 0.05;  // alpha
  // The ranking loss has two sums, one per retrieval direction. By default
  // the second sum evaluates the penalty with swapped arguments, s(v, m);
  // with this flag it keeps the caption-first order s(m_k, v) instead.
  bool symmetric_argument_order = false;
};

// Aligned batch: images[i] pairs with texts[i]; every other in-batch item is
// a contrastive example for both directions.
struct EmbeddingBatch {
  std::vector<Tensor> images;  // v_i
  std::vector<Tensor> texts;   // m_i

  std::size_t size() const { return images.size(); }
  // Count/dimension checks plus the embedding-cone invariants (unit norm,
  // non-negative coordinates). The loss itself only needs the counts.
  void validate(double norm_tol = 1e-6) const;
};

// Contrastive pairwise ranking loss over all B-1 in-batch negatives,
// summed (not averaged) over the batch:
//   L = sum_i sum_{k != i} max{0, alpha - s(m_i, v_i) + s(m_i, v_k)}
//     + sum_i sum_{k != i} max{0, alpha - s(v_i, m_i) + s(v_i, m_k)}
// (second sum per the argument-order flag above).
double contrastive_loss(const EmbeddingBatch& batch, const LossConfig& cfg);

// Same value as contrastive_loss, recorded on the tape so gradients flow
// back into every embedding (and from there to the encoders' parameters).
Tensor contrastive_loss_node(KernelTape& tape, const EmbeddingBatch& batch,
                             const LossConfig& cfg);

// Records the loss node and immediately replays the tape; afterwards every
// upstream parameter's grad holds dL/dparam.
void loss_gradients(const EmbeddingBatch& batch, const LossConfig& cfg, KernelTape& tape);

}  // namespace ordemb
