#include "sdp/layers.hpp"

#include <cmath>
#include <string>

#include "sdp/error.hpp"

namespace sdp {

double biaffine(const Eigen::VectorXd& v1, const Eigen::VectorXd& v2, const Eigen::MatrixXd& u,
                double b) {
  if (u.rows() != v1.size() || u.cols() != v2.size())
    throw InvalidArgument("biaffine: U is " + std::to_string(u.rows()) + "x" +
                          std::to_string(u.cols()) + ", inputs are " + std::to_string(v1.size()) +
                          " and " + std::to_string(v2.size()));
  return v1.dot(u * v2) + b;
}

Eigen::VectorXd diagonal_biaffine(const Eigen::VectorXd& v1, const Eigen::VectorXd& v2,
                                  const Eigen::MatrixXd& u, const Eigen::VectorXd& b) {
  if (v1.size() != v2.size() || u.rows() != v1.size() || u.cols() != b.size())
    throw InvalidArgument("diagonal_biaffine: shape mismatch");
  return u.transpose() * v1.cwiseProduct(v2) + b;
}

double trilinear(const Eigen::VectorXd& v1, const Eigen::VectorXd& v2, const Eigen::VectorXd& v3,
                 const Eigen::MatrixXd& u1, const Eigen::MatrixXd& u2, const Eigen::MatrixXd& u3) {
  const Eigen::Index d = v1.size();
  for (const auto* m : {&u1, &u2, &u3})
    if (m->rows() != d || m->cols() != d) throw InvalidArgument("trilinear: factor shape mismatch");
  if (v2.size() != d || v3.size() != d) throw InvalidArgument("trilinear: vector size mismatch");
  return ((u1 * v1).array() * (u2 * v2).array() * (u3 * v3).array()).sum();
}

const Eigen::MatrixXd& lstm_forward(const Eigen::MatrixXd& w, const Eigen::MatrixXd& u,
                                    const Eigen::MatrixXd& b, const Eigen::MatrixXd& input,
                                    bool reverse, const Eigen::VectorXd& recur_mask,
                                    LstmRecord& rec) {
  const Eigen::Index h = u.cols();
  const Eigen::Index n = input.cols();
  if (w.rows() != 4 * h || u.rows() != 4 * h || b.rows() != 4 * h || w.cols() != input.rows())
    throw InvalidArgument("lstm_forward: shape mismatch");

  rec.input = input;
  rec.reverse = reverse;
  rec.recur_mask = recur_mask;
  rec.gates.resize(4 * h, n);
  rec.cell.resize(h, n);
  rec.hidden.resize(h, n);

  const Eigen::MatrixXd projected = (w * input).colwise() + b.col(0);
  Eigen::VectorXd h_prev = Eigen::VectorXd::Zero(h);
  Eigen::VectorXd c_prev = Eigen::VectorXd::Zero(h);
  for (Eigen::Index step = 0; step < n; ++step) {
    const Eigen::Index t = reverse ? n - 1 - step : step;
    const Eigen::VectorXd h_in = recur_mask.size() ? h_prev.cwiseProduct(recur_mask) : h_prev;
    Eigen::VectorXd z = projected.col(t) + u * h_in;
    for (Eigen::Index k = 0; k < 4 * h; ++k)
      z(k) = (k >= 2 * h && k < 3 * h) ? std::tanh(z(k)) : logistic(z(k));
    const auto i = z.segment(0, h).array();
    const auto f = z.segment(h, h).array();
    const auto g = z.segment(2 * h, h).array();
    const auto o = z.segment(3 * h, h).array();
    Eigen::VectorXd c = (f * c_prev.array() + i * g).matrix();
    Eigen::VectorXd hid = (o * c.array().tanh()).matrix();
    rec.gates.col(t) = z;
    rec.cell.col(t) = c;
    rec.hidden.col(t) = hid;
    h_prev = hid;
    c_prev = c;
  }
  return rec.hidden;
}

Eigen::MatrixXd lstm_backward(const Eigen::MatrixXd& w, const Eigen::MatrixXd& u,
                              const LstmRecord& rec, const Eigen::MatrixXd& grad_hidden,
                              Eigen::MatrixXd& grad_w, Eigen::MatrixXd& grad_u,
                              Eigen::MatrixXd& grad_b) {
  const Eigen::Index h = u.cols();
  const Eigen::Index n = rec.input.cols();
  Eigen::MatrixXd grad_z(4 * h, n);
  Eigen::VectorXd dh_next = Eigen::VectorXd::Zero(h);
  Eigen::VectorXd dc_next = Eigen::VectorXd::Zero(h);
  Eigen::MatrixXd h_in_all = Eigen::MatrixXd::Zero(h, n);

  for (Eigen::Index step = n - 1; step >= 0; --step) {
    const Eigen::Index t = rec.reverse ? n - 1 - step : step;
    const bool has_prev = step > 0;
    const Eigen::Index prev = rec.reverse ? t + 1 : t - 1;
    const Eigen::VectorXd c_prev = has_prev ? Eigen::VectorXd(rec.cell.col(prev))
                                            : Eigen::VectorXd::Zero(h);
    if (has_prev) {
      h_in_all.col(t) = rec.recur_mask.size() ? rec.hidden.col(prev).cwiseProduct(rec.recur_mask)
                                              : Eigen::VectorXd(rec.hidden.col(prev));
    }

    const auto z = rec.gates.col(t);
    const Eigen::ArrayXd i = z.segment(0, h).array();
    const Eigen::ArrayXd f = z.segment(h, h).array();
    const Eigen::ArrayXd g = z.segment(2 * h, h).array();
    const Eigen::ArrayXd o = z.segment(3 * h, h).array();
    const Eigen::ArrayXd tc = rec.cell.col(t).array().tanh();

    const Eigen::ArrayXd dh = grad_hidden.col(t).array() + dh_next.array();
    const Eigen::ArrayXd dc = dh * o * (1.0 - tc * tc) + dc_next.array();
    grad_z.col(t).segment(0, h) = (dc * g * i * (1.0 - i)).matrix();
    grad_z.col(t).segment(h, h) = (dc * c_prev.array() * f * (1.0 - f)).matrix();
    grad_z.col(t).segment(2 * h, h) = (dc * i * (1.0 - g * g)).matrix();
    grad_z.col(t).segment(3 * h, h) = (dh * tc * o * (1.0 - o)).matrix();

    dc_next = (dc * f).matrix();
    Eigen::VectorXd dh_prev = u.transpose() * grad_z.col(t);
    if (rec.recur_mask.size()) dh_prev = dh_prev.cwiseProduct(rec.recur_mask);
    dh_next = dh_prev;
  }

  grad_w.noalias() += grad_z * rec.input.transpose();
  grad_u.noalias() += grad_z * h_in_all.transpose();
  grad_b.col(0) += grad_z.rowwise().sum();
  return w.transpose() * grad_z;
}

}  // namespace sdp
