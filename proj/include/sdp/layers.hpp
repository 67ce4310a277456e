#pragma once

#include <cmath>

#include <Eigen/Dense>

namespace sdp {

// v1^T U v2 + b. Throws InvalidArgument on shape mismatch.
double biaffine(const Eigen::VectorXd& v1, const Eigen::VectorXd& v2, const Eigen::MatrixXd& u,
                double b);

// Label biaffine with a tensor that is diagonal in its first and third index;
// `u` holds the diagonal slab (d x c). Class l scores sum_m u(m,l) v1[m] v2[m] + b[l].
Eigen::VectorXd diagonal_biaffine(const Eigen::VectorXd& v1, const Eigen::VectorXd& v2,
                                  const Eigen::MatrixXd& u, const Eigen::VectorXd& b);

// Rank-d contraction: sum_m (U1 v1)[m] (U2 v2)[m] (U3 v3)[m].
double trilinear(const Eigen::VectorXd& v1, const Eigen::VectorXd& v2, const Eigen::VectorXd& v3,
                 const Eigen::MatrixXd& u1, const Eigen::MatrixXd& u2, const Eigen::MatrixXd& u3);

inline double logistic(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log(1 + exp(x)) without overflow.
inline double softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

// One direction of one LSTM layer over a sequence stored column-wise.
struct LstmRecord {
  Eigen::MatrixXd input;      // in x N, after input dropout
  Eigen::MatrixXd gates;      // 4h x N, activated [input, forget, cell, output]
  Eigen::MatrixXd cell;       // h x N
  Eigen::MatrixXd hidden;     // h x N
  Eigen::VectorXd recur_mask; // h; empty when recurrent dropout is off
  bool reverse = false;
};

// Runs the cell left-to-right (or right-to-left when `reverse`) and stores
// everything the backward pass needs in `rec`. Returns rec.hidden.
const Eigen::MatrixXd& lstm_forward(const Eigen::MatrixXd& w, const Eigen::MatrixXd& u,
                                    const Eigen::MatrixXd& b, const Eigen::MatrixXd& input,
                                    bool reverse, const Eigen::VectorXd& recur_mask,
                                    LstmRecord& rec);

// Accumulates parameter gradients and returns d loss / d input.
Eigen::MatrixXd lstm_backward(const Eigen::MatrixXd& w, const Eigen::MatrixXd& u,
                              const LstmRecord& rec, const Eigen::MatrixXd& grad_hidden,
                              Eigen::MatrixXd& grad_w, Eigen::MatrixXd& grad_u,
                              Eigen::MatrixXd& grad_b);

}  // namespace sdp
