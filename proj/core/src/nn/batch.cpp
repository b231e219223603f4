#include "pan/nn/batch.hpp"

#include <cmath>
#include <string>

#include "pan/common/error.hpp"

namespace pan::nn {

using Eigen::Index;
using Eigen::MatrixXd;

BatchEval BatchEval::zeros_like() const {
  BatchEval z;
  z.input_dim = input_dim;
  z.batch = batch;
  z.order = order;
  z.data = MatrixXd::Zero(data.rows(), data.cols());
  return z;
}

ForwardTape forward_batch(const MlpSpec& spec, const ParamVector& params, const MatrixXd& X,
                          int order) {
  spec.validate();
  PAN_REQUIRE(order == 0 || order == 2, "batch order must be 0 or 2");
  PAN_REQUIRE(X.rows() == spec.input_dim, "input batch has wrong row count");
  PAN_REQUIRE(X.cols() >= 1, "empty batch");
  PAN_REQUIRE(params.size() == param_count(spec), "parameter vector has wrong length");

  const int d = spec.input_dim;
  const Index B = X.cols();
  const int C = order == 2 ? 1 + 2 * d : 1;

  ForwardTape tape;
  tape.input_dim = d;
  tape.batch = static_cast<int>(B);
  tape.order = order;
  tape.inputs.reserve(static_cast<std::size_t>(spec.layer_count()));

  MatrixXd H = MatrixXd::Zero(d, B * C);
  H.leftCols(B) = X;
  if (order == 2) {
    for (int j = 0; j < d; ++j) H.row(j).segment((1 + j) * B, B).setOnes();
  }

  for (int l = 0; l < spec.layer_count(); ++l) {
    const auto view = layer(spec, params, l);
    MatrixXd A = view.weight * H;
    A.leftCols(B).colwise() += view.bias;
    tape.inputs.push_back(std::move(H));
    if (l == spec.depth) {
      H = std::move(A);
      break;
    }
    // tanh and its channel rules
    const auto a = A.leftCols(B).array();
    MatrixXd t = a.tanh().matrix();
    H.resize(A.rows(), A.cols());
    H.leftCols(B) = t;
    if (order == 2) {
      const Eigen::ArrayXXd s1 = 1.0 - t.array().square();
      const Eigen::ArrayXXd s2 = -2.0 * t.array() * s1;
      for (int j = 0; j < d; ++j) {
        const auto a1 = A.middleCols((1 + j) * B, B).array();
        const auto a2 = A.middleCols((1 + d + j) * B, B).array();
        H.middleCols((1 + j) * B, B) = (s1 * a1).matrix();
        H.middleCols((1 + d + j) * B, B) = (s2 * a1.square() + s1 * a2).matrix();
      }
      tape.pre_first.push_back(A.middleCols(B, d * B));
      tape.pre_second.push_back(A.middleCols((1 + d) * B, d * B));
    }
    tape.tanh_value.push_back(std::move(t));
  }

  for (Index c = 0; c < H.cols(); ++c) {
    if (!H.col(c).allFinite()) {
      throw DivergenceError("non-finite network output at sample " + std::to_string(c % B));
    }
  }
  tape.output.input_dim = d;
  tape.output.batch = static_cast<int>(B);
  tape.output.order = order;
  tape.output.data = std::move(H);
  return tape;
}

MatrixXd forward_values(const MlpSpec& spec, const ParamVector& params, const MatrixXd& X) {
  return forward_batch(spec, params, X, 0).output.data;
}

void backward_batch(const MlpSpec& spec, const ParamVector& params, const ForwardTape& tape,
                    const BatchEval& adjoint, ParamVector& grad) {
  PAN_REQUIRE(grad.size() == params.size(), "gradient buffer has wrong length");
  PAN_REQUIRE(adjoint.data.rows() == tape.output.data.rows() &&
                  adjoint.data.cols() == tape.output.data.cols(),
              "adjoint shape does not match the forward output");
  const int d = tape.input_dim;
  const Index B = tape.batch;
  const bool second = tape.order == 2;

  MatrixXd G = adjoint.data;
  for (int l = spec.depth; l >= 0; --l) {
    const auto view = layer(spec, params, l);
    const MatrixXd& H = tape.inputs[static_cast<std::size_t>(l)];
    const Index off = layer_offset(spec, l);
    const Index out = view.weight.rows();
    const Index in = view.weight.cols();
    Eigen::Map<RowMajorMatrix> gW(grad.data() + off, out, in);
    Eigen::Map<Eigen::VectorXd> gb(grad.data() + off + out * in, out);
    gW.noalias() += G * H.transpose();
    gb += G.leftCols(B).rowwise().sum();
    if (l == 0) break;

    MatrixXd GH = view.weight.transpose() * G;
    // back through tanh of hidden layer l-1
    const auto k = static_cast<std::size_t>(l - 1);
    const Eigen::ArrayXXd t = tape.tanh_value[k].array();
    const Eigen::ArrayXXd s1 = 1.0 - t.square();
    G.resize(GH.rows(), GH.cols());
    if (!second) {
      G = (GH.array() * s1).matrix();
      continue;
    }
    const Eigen::ArrayXXd s2 = -2.0 * t * s1;
    const Eigen::ArrayXXd s3 = -2.0 * s1.square() + 4.0 * t.square() * s1;
    Eigen::ArrayXXd ga = GH.leftCols(B).array() * s1;
    for (int j = 0; j < d; ++j) {
      const auto a1 = tape.pre_first[k].middleCols(j * B, B).array();
      const auto a2 = tape.pre_second[k].middleCols(j * B, B).array();
      const auto g1 = GH.middleCols((1 + j) * B, B).array();
      const auto g2 = GH.middleCols((1 + d + j) * B, B).array();
      ga += g1 * s2 * a1 + g2 * (s3 * a1.square() + s2 * a2);
      G.middleCols((1 + j) * B, B) = (g1 * s1 + 2.0 * g2 * s2 * a1).matrix();
      G.middleCols((1 + d + j) * B, B) = (g2 * s1).matrix();
    }
    G.leftCols(B) = ga.matrix();
  }
}

LossAndGradient loss_gradient(const MlpSpec& spec, const ParamVector& params, const MatrixXd& X,
                              int order, const BatchLoss& loss) {
  const ForwardTape tape = forward_batch(spec, params, X, order);
  BatchEval adjoint = tape.output.zeros_like();
  LossAndGradient out;
  out.loss = loss(tape.output, adjoint);
  if (!std::isfinite(out.loss)) throw DivergenceError("non-finite loss value");
  out.gradient = ParamVector::Zero(params.size());
  backward_batch(spec, params, tape, adjoint, out.gradient);
  return out;
}

}  // namespace pan::nn
