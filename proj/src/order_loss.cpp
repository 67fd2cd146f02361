#include "ordemb/order_loss.hpp"

#include <cmath>
#include <stdexcept>

namespace ordemb {

double order_penalty(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("order_penalty dimension mismatch: " +
                                std::to_string(x.size()) + " vs " + std::to_string(y.size()));
  }
  double acc = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double r = y[j] - x[j];
    if (r > 0.0) acc += r * r;
  }
  return -acc;
}

double order_penalty(const Tensor& x, const Tensor& y) {
  return order_penalty(std::span<const double>(x.values()),
                       std::span<const double>(y.values()));
}

void EmbeddingBatch::validate(double norm_tol) const {
  if (images.size() != texts.size()) {
    throw std::invalid_argument("embedding batch has " + std::to_string(images.size()) +
                                " images but " + std::to_string(texts.size()) + " texts");
  }
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (const Tensor* t : {&images[i], &texts[i]}) {
      double sq = 0.0;
      for (double v : t->values()) {
        if (v < 0.0) {
          throw std::invalid_argument("batch item " + std::to_string(i) +
                                      " has a negative embedding coordinate");
        }
        sq += v * v;
      }
      if (std::fabs(std::sqrt(sq) - 1.0) > norm_tol) {
        throw std::invalid_argument("batch item " + std::to_string(i) +
                                    " is not unit-norm (|.|_2 = " +
                                    std::to_string(std::sqrt(sq)) + ")");
      }
    }
  }
}

namespace {

struct LossTerms {
  double value = 0.0;
  // coef_mv[i][k]: weight on s(m_i, v_k); coef_vm[i][k]: weight on s(v_i, m_k).
  std::vector<double> coef_mv;
  std::vector<double> coef_vm;
};

void check_batch(const EmbeddingBatch& batch) {
  if (batch.images.size() != batch.texts.size()) {
    throw std::invalid_argument("embedding batch has " + std::to_string(batch.images.size()) +
                                " images but " + std::to_string(batch.texts.size()) + " texts");
  }
  if (batch.size() < 2) {
    throw std::invalid_argument("contrastive loss needs a batch of >= 2 pairs, got " +
                                std::to_string(batch.size()));
  }
  const std::size_t d = batch.images[0].size();
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (batch.images[i].size() != d || batch.texts[i].size() != d) {
      throw std::invalid_argument("batch item " + std::to_string(i) +
                                  " has inconsistent embedding dimensionality");
    }
  }
}

// Evaluates the hinge terms once; also collects per-pair coefficients on the
// s values so the backward pass is a single weighted sweep.
LossTerms eval_loss(const EmbeddingBatch& batch, const LossConfig& cfg, bool want_coefs) {
  check_batch(batch);
  const std::size_t b = batch.size();

  std::vector<double> s_mv(b * b);  // s(m_i, v_k)
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t k = 0; k < b; ++k) {
      s_mv[i * b + k] = order_penalty(batch.texts[i], batch.images[k]);
    }
  }
  std::vector<double> s_vm;  // s(v_i, m_k), only for the literal argument order
  if (!cfg.symmetric_argument_order) {
    s_vm.resize(b * b);
    for (std::size_t i = 0; i < b; ++i) {
      for (std::size_t k = 0; k < b; ++k) {
        s_vm[i * b + k] = order_penalty(batch.images[i], batch.texts[k]);
      }
    }
  }

  LossTerms out;
  if (want_coefs) {
    out.coef_mv.assign(b * b, 0.0);
    out.coef_vm.assign(b * b, 0.0);
  }

  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t k = 0; k < b; ++k) {
      if (k == i) continue;
      // caption query, contrastive images
      const double t1 = cfg.margin - s_mv[i * b + i] + s_mv[i * b + k];
      if (t1 > 0.0) {
        out.value += t1;
        if (want_coefs) {
          out.coef_mv[i * b + i] -= 1.0;
          out.coef_mv[i * b + k] += 1.0;
        }
      }
      // image query, contrastive captions
      if (cfg.symmetric_argument_order) {
        const double t2 = cfg.margin - s_mv[i * b + i] + s_mv[k * b + i];
        if (t2 > 0.0) {
          out.value += t2;
          if (want_coefs) {
            out.coef_mv[i * b + i] -= 1.0;
            out.coef_mv[k * b + i] += 1.0;
          }
        }
      } else {
        const double t2 = cfg.margin - s_vm[i * b + i] + s_vm[i * b + k];
        if (t2 > 0.0) {
          out.value += t2;
          if (want_coefs) {
            out.coef_vm[i * b + i] -= 1.0;
            out.coef_vm[i * b + k] += 1.0;
          }
        }
      }
    }
  }
  return out;
}

// Adds c * d s(x, y) into the grads of x and y:
//   ds/dx_j = 2 max(0, y_j - x_j),  ds/dy_j = -2 max(0, y_j - x_j).
void accumulate_penalty_grad(Tensor& x, Tensor& y, double c, double upstream) {
  const std::size_t d = x.size();
  const double* xv = x.values().data();
  const double* yv = y.values().data();
  double* gx = x.grad().data();
  double* gy = y.grad().data();
  const double w = 2.0 * c * upstream;
  for (std::size_t j = 0; j < d; ++j) {
    const double r = yv[j] - xv[j];
    if (r > 0.0) {
      gx[j] += w * r;
      gy[j] -= w * r;
    }
  }
}

}  // namespace

double contrastive_loss(const EmbeddingBatch& batch, const LossConfig& cfg) {
  if (cfg.margin < 0.0) {
    throw std::invalid_argument("margin must be non-negative");
  }
  return eval_loss(batch, cfg, /*want_coefs=*/false).value;
}

Tensor contrastive_loss_node(KernelTape& tape, const EmbeddingBatch& batch,
                             const LossConfig& cfg) {
  if (cfg.margin < 0.0) {
    throw std::invalid_argument("margin must be non-negative");
  }
  LossTerms terms = eval_loss(batch, cfg, /*want_coefs=*/true);
  Tensor loss = Tensor::scalar(terms.value);
  const std::size_t b = batch.size();
  tape.push([batch, loss, coef_mv = std::move(terms.coef_mv),
             coef_vm = std::move(terms.coef_vm), b]() mutable {
    const double upstream = loss.grad()[0];
    if (upstream == 0.0) return;
    for (std::size_t i = 0; i < b; ++i) {
      for (std::size_t k = 0; k < b; ++k) {
        const double cmv = coef_mv[i * b + k];
        if (cmv != 0.0) {
          accumulate_penalty_grad(batch.texts[i], batch.images[k], cmv, upstream);
        }
        if (!coef_vm.empty()) {
          const double cvm = coef_vm[i * b + k];
          if (cvm != 0.0) {
            accumulate_penalty_grad(batch.images[i], batch.texts[k], cvm, upstream);
          }
        }
      }
    }
  });
  return loss;
}

void loss_gradients(const EmbeddingBatch& batch, const LossConfig& cfg, KernelTape& tape) {
  Tensor loss = contrastive_loss_node(tape, batch, cfg);
  backward(tape, loss);
}

}  // namespace ordemb
