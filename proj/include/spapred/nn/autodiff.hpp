#pragma once

#include <Eigen/Core>

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace spapred::nn {

using Matrix = Eigen::MatrixXd;

/// A named trainable tensor. grad accumulates across backward passes until
/// zero_grad() is called.
struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;

  Parameter() = default;
  Parameter(std::string n, Matrix v)
      : name(std::move(n)), value(std::move(v)), grad(Matrix::Zero(value.rows(), value.cols())) {}
  void zero_grad() { grad.setZero(value.rows(), value.cols()); }
};

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Handle to a node on a Tape.
struct Var {
  int id = -1;
};

/// Reverse-mode differentiation over dense matrices. Each operation records
/// its value and a closure that pushes the output adjoint to its inputs.
/// Shapes are checked when the node is recorded.
class Tape {
 public:
  Var constant(Matrix value);
  /// Leaf bound to p; backward() adds into p.grad.
  Var parameter(Parameter& p);

  Var matmul(Var a, Var b);
  /// x (r x c) plus a 1 x c row broadcast over rows.
  Var add_row(Var x, Var row);
  Var add(Var a, Var b);
  Var hadamard(Var a, Var b);
  /// Row i of x scaled by the constant s[i].
  Var scale_rows(Var x, const Eigen::VectorXd& s);
  Var relu(Var x);
  /// log(0.5 exp(x) + 0.5), zero at the origin.
  Var shifted_softplus(Var x);
  /// "relu" or "ssp"; anything else throws.
  Var activation(std::string_view name, Var x);
  Var concat_cols(const std::vector<Var>& parts);
  /// out.row(k) = x.row(index[k]).
  Var gather_rows(Var x, const std::vector<int>& index);
  /// out.row(index[k]) += x.row(k); out has n_rows rows.
  Var scatter_sum_rows(Var x, const std::vector<int>& index, int n_rows);
  Var sum(Var x);
  /// Mean of (x - target)^2 over all entries.
  Var mse(Var x, const Matrix& target);

  /// Affine map x W + b with W (in x out) and b (1 x out).
  Var linear(Var x, Parameter& weight, Parameter* bias);

  const Matrix& value(Var v) const { return nodes_.at(v.id).value; }
  double scalar(Var v) const;

  /// Backpropagates from a 1 x 1 node with unit seed.
  void backward(Var loss);

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    std::function<void(Tape&, const Matrix&)> backward;
    Parameter* parameter = nullptr;
  };

  Var push(Matrix value, std::function<void(Tape&, const Matrix&)> backward = {});
  void accumulate(Var v, const Matrix& g);
  const Matrix& checked(Var v) const;

  std::vector<Node> nodes_;
};

}  // namespace spapred::nn
