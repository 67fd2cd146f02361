#include "ordemb/tensor.hpp"

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace ordemb {

namespace {

std::size_t checked_size(const std::vector<std::size_t>& shape) {
  if (shape.empty()) {
    throw std::invalid_argument("tensor shape must have at least one extent");
  }
  std::size_t n = 1;
  for (std::size_t e : shape) {
    if (e == 0) {
      throw std::invalid_argument("tensor extent must be positive, got shape " + shape_str(shape));
    }
    n *= e;
  }
  return n;
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape) {
  const std::size_t n = checked_size(shape);
  data_ = std::make_shared<Data>();
  data_->shape = std::move(shape);
  data_->values.assign(n, 0.0);
  data_->grad.assign(n, 0.0);
}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> values) {
  const std::size_t n = checked_size(shape);
  if (values.size() != n) {
    throw std::invalid_argument("value count " + std::to_string(values.size()) +
                                " does not match shape " + shape_str(shape));
  }
  data_ = std::make_shared<Data>();
  data_->shape = std::move(shape);
  data_->values = std::move(values);
  data_->grad.assign(n, 0.0);
}

Tensor Tensor::scalar(double value) { return Tensor({1}, {value}); }

const std::vector<std::size_t>& Tensor::shape() const {
  if (!data_) throw std::logic_error("use of undefined tensor");
  return data_->shape;
}

std::size_t Tensor::extent(std::size_t dim) const {
  const auto& s = shape();
  if (dim >= s.size()) throw std::out_of_range("tensor dim out of range");
  return s[dim];
}

std::size_t Tensor::size() const {
  if (!data_) throw std::logic_error("use of undefined tensor");
  return data_->values.size();
}

std::vector<double>& Tensor::values() {
  if (!data_) throw std::logic_error("use of undefined tensor");
  return data_->values;
}

const std::vector<double>& Tensor::values() const {
  if (!data_) throw std::logic_error("use of undefined tensor");
  return data_->values;
}

std::vector<double>& Tensor::grad() {
  if (!data_) throw std::logic_error("use of undefined tensor");
  return data_->grad;
}

const std::vector<double>& Tensor::grad() const {
  if (!data_) throw std::logic_error("use of undefined tensor");
  return data_->grad;
}

void Tensor::zero_grad() {
  auto& g = grad();
  std::fill(g.begin(), g.end(), 0.0);
}

std::string shape_str(const std::vector<std::size_t>& shape) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) os << " x ";
    os << shape[i];
  }
  os << "]";
  return os.str();
}

bool all_finite(const Tensor& t) {
  for (double v : t.values()) {
    if (!std::isfinite(v)) return false;
  }
  for (double g : t.grad()) {
    if (!std::isfinite(g)) return false;
  }
  return true;
}

void KernelTape::push(std::function<void()> backward_fn) {
  if (consumed_) {
    throw std::logic_error("kernel tape already consumed by backward()");
  }
  entries_.push_back(std::move(backward_fn));
}

void backward(KernelTape& tape, const Tensor& loss) {
  if (tape.consumed_) {
    throw std::logic_error("kernel tape already consumed by backward()");
  }
  if (loss.size() != 1) {
    throw std::invalid_argument("backward() expects a scalar loss, got shape " +
                                shape_str(loss.shape()));
  }
  tape.consumed_ = true;
  Tensor seed = loss;
  seed.grad()[0] += 1.0;
  for (auto it = tape.entries_.rbegin(); it != tape.entries_.rend(); ++it) {
    (*it)();
  }
  tape.entries_.clear();
}

Tensor conv1d_padded(KernelTape& tape, const Tensor& input,
                     const Tensor& weights, const Tensor& bias) {
  if (input.rank() != 2) {
    throw std::invalid_argument("conv1d_padded input must be [t x c_in], got " +
                                shape_str(input.shape()));
  }
  if (weights.rank() != 3) {
    throw std::invalid_argument("conv1d_padded weights must be [c_out x c_in x l], got " +
                                shape_str(weights.shape()));
  }
  const std::size_t t = input.extent(0);
  const std::size_t c_in = input.extent(1);
  const std::size_t c_out = weights.extent(0);
  const std::size_t l = weights.extent(2);
  if (weights.extent(1) != c_in) {
    throw std::invalid_argument("conv1d_padded channel mismatch: input " +
                                shape_str(input.shape()) + " vs weights " +
                                shape_str(weights.shape()));
  }
  if (l % 2 == 0) {
    throw std::invalid_argument("conv1d_padded filter length must be odd, got " +
                                std::to_string(l));
  }
  if (bias.rank() != 1 || bias.extent(0) != c_out) {
    throw std::invalid_argument("conv1d_padded bias must be [c_out] = [" +
                                std::to_string(c_out) + "], got " + shape_str(bias.shape()));
  }

  const std::ptrdiff_t half = static_cast<std::ptrdiff_t>((l - 1) / 2);
  Tensor out({t, c_out});
  {
    const double* in = input.values().data();
    const double* w = weights.values().data();
    const double* b = bias.values().data();
    double* o = out.values().data();
    for (std::size_t x = 0; x < t; ++x) {
      for (std::size_t j = 0; j < c_out; ++j) {
        double acc = b[j];
        const double* wj = w + j * c_in * l;
        for (std::size_t p = 0; p < l; ++p) {
          const std::ptrdiff_t u = static_cast<std::ptrdiff_t>(x + p) - half;
          if (u < 0 || u >= static_cast<std::ptrdiff_t>(t)) continue;
          const double* row = in + static_cast<std::size_t>(u) * c_in;
          for (std::size_t m = 0; m < c_in; ++m) {
            acc += wj[m * l + p] * row[m];
          }
        }
        o[x * c_out + j] = acc;
      }
    }
  }

  tape.push([input, weights, bias, out, t, c_in, c_out, l, half]() mutable {
    const double* go = out.grad().data();
    const double* in = input.values().data();
    const double* w = weights.values().data();
    double* gin = input.grad().data();
    double* gw = weights.grad().data();
    double* gb = bias.grad().data();
    for (std::size_t x = 0; x < t; ++x) {
      for (std::size_t j = 0; j < c_out; ++j) {
        const double g = go[x * c_out + j];
        if (g == 0.0) continue;
        gb[j] += g;
        const double* wj = w + j * c_in * l;
        double* gwj = gw + j * c_in * l;
        for (std::size_t p = 0; p < l; ++p) {
          const std::ptrdiff_t u = static_cast<std::ptrdiff_t>(x + p) - half;
          if (u < 0 || u >= static_cast<std::ptrdiff_t>(t)) continue;
          const double* row = in + static_cast<std::size_t>(u) * c_in;
          double* grow = gin + static_cast<std::size_t>(u) * c_in;
          for (std::size_t m = 0; m < c_in; ++m) {
            gwj[m * l + p] += g * row[m];
            grow[m] += g * wj[m * l + p];
          }
        }
      }
    }
  });
  return out;
}

Tensor maxout2(KernelTape& tape, const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    throw std::invalid_argument("maxout2 shape mismatch: " + shape_str(a.shape()) +
                                " vs " + shape_str(b.shape()));
  }
  const std::size_t n = a.size();
  Tensor out(a.shape());
  std::vector<std::uint8_t> a_wins(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double av = a.values()[i];
    const double bv = b.values()[i];
    a_wins[i] = av >= bv ? 1 : 0;
    out.values()[i] = a_wins[i] ? av : bv;
  }
  tape.push([a, b, out, wins = std::move(a_wins), n]() mutable {
    const double* go = out.grad().data();
    double* ga = a.grad().data();
    double* gb = b.grad().data();
    for (std::size_t i = 0; i < n; ++i) {
      if (wins[i]) {
        ga[i] += go[i];
      } else {
        gb[i] += go[i];
      }
    }
  });
  return out;
}

Tensor maxpool_over_time(KernelTape& tape, const Tensor& input) {
  if (input.rank() != 2) {
    throw std::invalid_argument("maxpool_over_time input must be [t x f], got " +
                                shape_str(input.shape()));
  }
  const std::size_t t = input.extent(0);
  const std::size_t f = input.extent(1);
  if (t < 1) {
    throw std::invalid_argument("maxpool_over_time needs a nonempty temporal axis");
  }
  Tensor out({f});
  std::vector<std::size_t> argmax(f, 0);
  {
    const double* in = input.values().data();
    double* o = out.values().data();
    for (std::size_t j = 0; j < f; ++j) o[j] = in[j];
    for (std::size_t x = 1; x < t; ++x) {
      const double* row = in + x * f;
      for (std::size_t j = 0; j < f; ++j) {
        if (row[j] > o[j]) {  // strict: ties keep the earliest index
          o[j] = row[j];
          argmax[j] = x;
        }
      }
    }
  }
  tape.push([input, out, am = std::move(argmax), f]() mutable {
    const double* go = out.grad().data();
    double* gin = input.grad().data();
    for (std::size_t j = 0; j < f; ++j) {
      gin[am[j] * f + j] += go[j];
    }
  });
  return out;
}

Tensor linear(KernelTape& tape, const Tensor& input, const Tensor& weights) {
  if (input.rank() != 1) {
    throw std::invalid_argument("linear input must be rank 1, got " +
                                shape_str(input.shape()));
  }
  if (weights.rank() != 2 || weights.extent(1) != input.extent(0)) {
    throw std::invalid_argument("linear shape mismatch: input " + shape_str(input.shape()) +
                                " vs weights " + shape_str(weights.shape()));
  }
  const std::size_t n = input.extent(0);
  const std::size_t d = weights.extent(0);
  Tensor out({d});
  {
    const double* x = input.values().data();
    const double* w = weights.values().data();
    double* o = out.values().data();
    for (std::size_t i = 0; i < d; ++i) {
      double acc = 0.0;
      const double* wi = w + i * n;
      for (std::size_t j = 0; j < n; ++j) acc += wi[j] * x[j];
      o[i] = acc;
    }
  }
  tape.push([input, weights, out, n, d]() mutable {
    const double* go = out.grad().data();
    const double* x = input.values().data();
    const double* w = weights.values().data();
    double* gx = input.grad().data();
    double* gw = weights.grad().data();
    for (std::size_t i = 0; i < d; ++i) {
      const double g = go[i];
      if (g == 0.0) continue;
      const double* wi = w + i * n;
      double* gwi = gw + i * n;
      for (std::size_t j = 0; j < n; ++j) {
        gwi[j] += g * x[j];
        gx[j] += g * wi[j];
      }
    }
  });
  return out;
}

Tensor abs_elementwise(KernelTape& tape, const Tensor& input) {
  const std::size_t n = input.size();
  Tensor out(input.shape());
  for (std::size_t i = 0; i < n; ++i) {
    out.values()[i] = std::fabs(input.values()[i]);
  }
  tape.push([input, out, n]() mutable {
    const double* go = out.grad().data();
    const double* x = input.values().data();
    double* gx = input.grad().data();
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] > 0.0) {
        gx[i] += go[i];
      } else if (x[i] < 0.0) {
        gx[i] -= go[i];
      }
      // subgradient at exactly 0 is 0
    }
  });
  return out;
}

Tensor unit_normalize(KernelTape& tape, const Tensor& input) {
  if (input.rank() != 1) {
    throw std::invalid_argument("unit_normalize input must be rank 1, got " +
                                shape_str(input.shape()));
  }
  const std::size_t n = input.size();
  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = input.values()[i];
    sq += v * v;
  }
  const double norm = std::sqrt(sq);
  if (!(norm > kNormFloor)) {
    throw std::domain_error("unit_normalize: degenerate embedding, norm " +
                            std::to_string(norm) + " <= " + std::to_string(kNormFloor));
  }
  Tensor out({n});
  for (std::size_t i = 0; i < n; ++i) {
    out.values()[i] = input.values()[i] / norm;
  }
  tape.push([input, out, n, norm]() mutable {
    // d(x/||x||)/dx = I/||x|| - x x^T / ||x||^3
    const double* go = out.grad().data();
    const double* x = input.values().data();
    double* gx = input.grad().data();
    double dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) dot += x[i] * go[i];
    const double inv = 1.0 / norm;
    const double inv3 = inv * inv * inv;
    for (std::size_t i = 0; i < n; ++i) {
      gx[i] += go[i] * inv - x[i] * dot * inv3;
    }
  });
  return out;
}

}  // namespace ordemb
