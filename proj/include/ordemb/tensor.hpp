#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace ordemb {

// Dense double-precision tensor with a same-shape gradient buffer.
// Copies share storage (handle semantics) so a tape entry and the caller
// always see the same values/grad.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shape);
  Tensor(std::vector<std::size_t> shape, std::vector<double> values);

  static Tensor scalar(double value);

  bool defined() const { return data_ != nullptr; }
  const std::vector<std::size_t>& shape() const;
  std::size_t rank() const { return shape().size(); }
  std::size_t extent(std::size_t dim) const;
  std::size_t size() const;

  std::vector<double>& values();
  const std::vector<double>& values() const;
  std::vector<double>& grad();
  const std::vector<double>& grad() const;

  void zero_grad();

  // True when both tensors refer to the same storage.
  bool same_storage(const Tensor& other) const { return data_ == other.data_; }

 private:
  struct Data {
    std::vector<std::size_t> shape;
    std::vector<double> values;
    std::vector<double> grad;
  };
  std::shared_ptr<Data> data_;
};

std::string shape_str(const std::vector<std::size_t>& shape);
bool all_finite(const Tensor& t);

// Ordered record of executed kernels. Each entry is a closure that
// propagates the output gradient of one kernel to its inputs. backward()
// replays entries in exact reverse execution order, once.
class KernelTape {
 public:
  void push(std::function<void()> backward_fn);
  std::size_t size() const { return entries_.size(); }
  bool consumed() const { return consumed_; }

  friend void backward(KernelTape& tape, const Tensor& loss);

 private:
  std::vector<std::function<void()>> entries_;
  bool consumed_ = false;
};

// Seeds d(loss)/d(loss) = 1 and replays the tape in reverse. Gradients
// accumulate into each tensor's grad buffer; callers zero them between steps.
void backward(KernelTape& tape, const Tensor& loss);

// Padded temporal convolution. input [t x c_in], weights [c_out x c_in x l]
// with odd l, bias [c_out] -> output [t x c_out]. Zero padding of (l-1)/2
// rows on each side keeps the temporal extent unchanged. No activation.
Tensor conv1d_padded(KernelTape& tape, const Tensor& input,
                     const Tensor& weights, const Tensor& bias);

// Elementwise max of two same-shape tensors. The backward pass routes each
// output gradient entirely to the winning branch; ties go to `a`.
Tensor maxout2(KernelTape& tape, const Tensor& a, const Tensor& b);

// Global max over the temporal axis. input [t x f] -> output [f]. Gradient
// flows to the first maximal time index of each column.
Tensor maxpool_over_time(KernelTape& tape, const Tensor& input);

// Matrix-vector product without bias. input [n], weights [d x n] -> [d].
Tensor linear(KernelTape& tape, const Tensor& input, const Tensor& weights);

// Elementwise absolute value; output lies in the non-negative cone.
// Subgradient at exactly 0 is 0.
Tensor abs_elementwise(KernelTape& tape, const Tensor& input);

// input / ||input||_2 for a rank-1 tensor. Rejects norms <= kNormFloor.
Tensor unit_normalize(KernelTape& tape, const Tensor& input);

inline constexpr double kNormFloor = 1e-8;

}  // namespace ordemb
