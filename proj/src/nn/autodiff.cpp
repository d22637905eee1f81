#include "spapred/nn/autodiff.hpp"

#include <cmath>

namespace spapred::nn {

namespace {

std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

// Stable log(1 + exp(x)).
double softplus(double x) { return x > 30.0 ? x : std::log1p(std::exp(x)); }

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

Var Tape::push(Matrix value, std::function<void(Tape&, const Matrix&)> backward) {
  nodes_.push_back(Node{std::move(value), Matrix(), std::move(backward), nullptr});
  return Var{static_cast<int>(nodes_.size()) - 1};
}

const Matrix& Tape::checked(Var v) const {
  if (v.id < 0 || v.id >= static_cast<int>(nodes_.size()))
    throw std::out_of_range("variable does not belong to this tape");
  return nodes_[v.id].value;
}

void Tape::accumulate(Var v, const Matrix& g) {
  Node& n = nodes_[v.id];
  if (n.grad.size() == 0)
    n.grad = g;
  else
    n.grad += g;
}

double Tape::scalar(Var v) const {
  const Matrix& m = checked(v);
  if (m.size() != 1) throw ShapeError("scalar() on a " + shape(m) + " node");
  return m(0, 0);
}

Var Tape::constant(Matrix value) { return push(std::move(value)); }

Var Tape::parameter(Parameter& p) {
  Var v = push(p.value);
  nodes_[v.id].parameter = &p;
  return v;
}

Var Tape::matmul(Var a, Var b) {
  const Matrix& A = checked(a);
  const Matrix& B = checked(b);
  if (A.cols() != B.rows()) throw ShapeError("matmul " + shape(A) + " * " + shape(B));
  return push(A * B, [a, b](Tape& t, const Matrix& g) {
    t.accumulate(a, g * t.value(b).transpose());
    t.accumulate(b, t.value(a).transpose() * g);
  });
}

Var Tape::add_row(Var x, Var row) {
  const Matrix& X = checked(x);
  const Matrix& R = checked(row);
  if (R.rows() != 1 || R.cols() != X.cols())
    throw ShapeError("add_row " + shape(X) + " + " + shape(R));
  Matrix out = X.rowwise() + R.row(0);
  return push(std::move(out), [x, row](Tape& t, const Matrix& g) {
    t.accumulate(x, g);
    t.accumulate(row, g.colwise().sum());
  });
}

Var Tape::add(Var a, Var b) {
  const Matrix& A = checked(a);
  const Matrix& B = checked(b);
  if (A.rows() != B.rows() || A.cols() != B.cols())
    throw ShapeError("add " + shape(A) + " + " + shape(B));
  return push(A + B, [a, b](Tape& t, const Matrix& g) {
    t.accumulate(a, g);
    t.accumulate(b, g);
  });
}

Var Tape::hadamard(Var a, Var b) {
  const Matrix& A = checked(a);
  const Matrix& B = checked(b);
  if (A.rows() != B.rows() || A.cols() != B.cols())
    throw ShapeError("hadamard " + shape(A) + " * " + shape(B));
  return push(A.cwiseProduct(B), [a, b](Tape& t, const Matrix& g) {
    t.accumulate(a, g.cwiseProduct(t.value(b)));
    t.accumulate(b, g.cwiseProduct(t.value(a)));
  });
}

Var Tape::scale_rows(Var x, const Eigen::VectorXd& s) {
  const Matrix& X = checked(x);
  if (s.size() != X.rows()) throw ShapeError("scale_rows: " + shape(X) + " with " +
                                             std::to_string(s.size()) + " scales");
  Matrix out = s.asDiagonal() * X;
  return push(std::move(out), [x, s](Tape& t, const Matrix& g) {
    t.accumulate(x, s.asDiagonal() * g);
  });
}

Var Tape::relu(Var x) {
  Matrix out = checked(x).cwiseMax(0.0);
  return push(std::move(out), [x](Tape& t, const Matrix& g) {
    const Matrix& X = t.value(x);
    t.accumulate(x, g.cwiseProduct((X.array() > 0.0).cast<double>().matrix()));
  });
}

Var Tape::shifted_softplus(Var x) {
  const double shift = std::log(2.0);
  Matrix out = checked(x).unaryExpr([shift](double v) { return softplus(v) - shift; });
  return push(std::move(out), [x](Tape& t, const Matrix& g) {
    t.accumulate(x, g.cwiseProduct(t.value(x).unaryExpr([](double v) { return sigmoid(v); })));
  });
}

Var Tape::activation(std::string_view name, Var x) {
  if (name == "relu") return relu(x);
  if (name == "ssp") return shifted_softplus(x);
  throw std::invalid_argument("unsupported activation '" + std::string(name) + "'");
}

Var Tape::concat_cols(const std::vector<Var>& parts) {
  if (parts.empty()) throw ShapeError("concat_cols of nothing");
  const Eigen::Index rows = checked(parts[0]).rows();
  Eigen::Index cols = 0;
  for (Var p : parts) {
    const Matrix& P = checked(p);
    if (P.rows() != rows) throw ShapeError("concat_cols row mismatch: " + shape(P));
    cols += P.cols();
  }
  Matrix out(rows, cols);
  std::vector<Eigen::Index> offsets;
  Eigen::Index off = 0;
  for (Var p : parts) {
    const Matrix& P = value(p);
    out.middleCols(off, P.cols()) = P;
    offsets.push_back(off);
    off += P.cols();
  }
  return push(std::move(out), [parts, offsets](Tape& t, const Matrix& g) {
    for (std::size_t i = 0; i < parts.size(); ++i)
      t.accumulate(parts[i], g.middleCols(offsets[i], t.value(parts[i]).cols()));
  });
}

Var Tape::gather_rows(Var x, const std::vector<int>& index) {
  const Matrix& X = checked(x);
  Matrix out(static_cast<Eigen::Index>(index.size()), X.cols());
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (index[k] < 0 || index[k] >= X.rows()) throw ShapeError("gather_rows index out of range");
    out.row(k) = X.row(index[k]);
  }
  return push(std::move(out), [x, index](Tape& t, const Matrix& g) {
    Matrix gx = Matrix::Zero(t.value(x).rows(), t.value(x).cols());
    for (std::size_t k = 0; k < index.size(); ++k) gx.row(index[k]) += g.row(k);
    t.accumulate(x, gx);
  });
}

Var Tape::scatter_sum_rows(Var x, const std::vector<int>& index, int n_rows) {
  const Matrix& X = checked(x);
  if (static_cast<Eigen::Index>(index.size()) != X.rows())
    throw ShapeError("scatter_sum_rows: index length differs from rows of " + shape(X));
  Matrix out = Matrix::Zero(n_rows, X.cols());
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (index[k] < 0 || index[k] >= n_rows) throw ShapeError("scatter_sum_rows index out of range");
    out.row(index[k]) += X.row(k);
  }
  return push(std::move(out), [x, index](Tape& t, const Matrix& g) {
    Matrix gx(static_cast<Eigen::Index>(index.size()), g.cols());
    for (std::size_t k = 0; k < index.size(); ++k) gx.row(k) = g.row(index[k]);
    t.accumulate(x, gx);
  });
}

Var Tape::sum(Var x) {
  Matrix out(1, 1);
  out(0, 0) = checked(x).sum();
  return push(std::move(out), [x](Tape& t, const Matrix& g) {
    t.accumulate(x, Matrix::Constant(t.value(x).rows(), t.value(x).cols(), g(0, 0)));
  });
}

Var Tape::mse(Var x, const Matrix& target) {
  const Matrix& X = checked(x);
  if (X.rows() != target.rows() || X.cols() != target.cols())
    throw ShapeError("mse " + shape(X) + " vs target " + shape(target));
  if (X.size() == 0) throw ShapeError("mse of an empty tensor");
  Matrix out(1, 1);
  out(0, 0) = (X - target).squaredNorm() / static_cast<double>(X.size());
  return push(std::move(out), [x, target](Tape& t, const Matrix& g) {
    const Matrix& X = t.value(x);
    t.accumulate(x, (2.0 * g(0, 0) / static_cast<double>(X.size())) * (X - target));
  });
}

Var Tape::linear(Var x, Parameter& weight, Parameter* bias) {
  Var y = matmul(x, parameter(weight));
  return bias ? add_row(y, parameter(*bias)) : y;
}

void Tape::backward(Var loss) {
  const Matrix& L = checked(loss);
  if (L.size() != 1) throw ShapeError("backward from a non-scalar " + shape(L));
  for (auto& n : nodes_) n.grad.resize(0, 0);
  nodes_[loss.id].grad = Matrix::Ones(1, 1);
  for (int i = loss.id; i >= 0; --i) {
    Node& n = nodes_[i];
    if (n.grad.size() == 0) continue;
    if (n.parameter) n.parameter->grad += n.grad;
    if (n.backward) {
      const Matrix g = n.grad;
      n.backward(*this, g);
    }
  }
}

}  // namespace spapred::nn
