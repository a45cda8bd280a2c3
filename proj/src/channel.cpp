#include "misose/channel.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "misose/sampling.hpp"

namespace misose {

ChannelModel::ChannelModel(int n_t, double sigma_h, double sigma_g)
    : n_t_(n_t), sigma_h_(sigma_h), sigma_g_(sigma_g) {
  if (n_t < 1) throw std::invalid_argument("n_t must be >= 1, got " + std::to_string(n_t));
  if (!(sigma_h > 0.0) || !std::isfinite(sigma_h))
    throw std::invalid_argument("sigma_h must be positive and finite");
  if (!(sigma_g > 0.0) || !std::isfinite(sigma_g))
    throw std::invalid_argument("sigma_g must be positive and finite");
}

PowerAllocation::PowerAllocation(std::vector<double> d, double budget)
    : d_(std::move(d)), budget_(budget) {
  if (d_.empty()) throw std::invalid_argument("power allocation must not be empty");
  if (!(budget >= 0.0) || !std::isfinite(budget))
    throw std::invalid_argument("power budget must be nonnegative and finite");
  for (double v : d_) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument("power allocation entries must be nonnegative and finite");
  }
  const double sum = total();
  if (sum > budget_ * (1.0 + 1e-12) + 1e-300)
    throw std::invalid_argument("power allocation exceeds budget: sum " + std::to_string(sum) +
                                " > " + std::to_string(budget_));
}

PowerAllocation PowerAllocation::uniform(int n_t, double budget) {
  if (n_t < 1) throw std::invalid_argument("n_t must be >= 1");
  return {std::vector<double>(static_cast<std::size_t>(n_t), budget / n_t), budget};
}

PowerAllocation PowerAllocation::single(int n_t, double budget) {
  if (n_t < 1) throw std::invalid_argument("n_t must be >= 1");
  std::vector<double> d(static_cast<std::size_t>(n_t), 0.0);
  d[0] = budget;
  return {std::move(d), budget};
}

PowerAllocation PowerAllocation::zeros(int n_t) {
  if (n_t < 1) throw std::invalid_argument("n_t must be >= 1");
  return {std::vector<double>(static_cast<std::size_t>(n_t), 0.0), 0.0};
}

double PowerAllocation::total() const { return std::accumulate(d_.begin(), d_.end(), 0.0); }

ComplexGainMatrix::ComplexGainMatrix(std::size_t rows, std::size_t cols, double scale)
    : rows_(rows), cols_(cols), scale_(scale), data_(rows * cols) {}

ComplexGainMatrix sample_channel(const ChannelModel& model, Side side, std::size_t count,
                                 std::uint64_t seed) {
  if (count == 0) throw std::invalid_argument("sample_channel: count must be >= 1");
  const double scale = model.scale(side);
  const auto n_t = static_cast<std::size_t>(model.n_t());
  ComplexGainMatrix out(count, n_t, scale);
  const std::uint64_t key = sampling::stream_key(seed, side);
  Complex* base = out.data().data();
  sampling::parallel_for(sampling::chunk_count(count), [&](std::size_t c) {
    const std::size_t begin = c * sampling::kChunkRows;
    const std::size_t rows = std::min(sampling::kChunkRows, count - begin);
    sampling::fill_gain_chunk(key, c, rows, model.n_t(), scale,
                              std::span<Complex>(base + begin * n_t, rows * n_t));
  });
  return out;
}

std::vector<double> quadratic_form(const ComplexGainMatrix& gains,
                                   const PowerAllocation& alloc) {
  if (gains.cols() != alloc.size()) {
    throw std::invalid_argument("quadratic_form: gain columns (" + std::to_string(gains.cols()) +
                                ") != allocation length (" + std::to_string(alloc.size()) + ")");
  }
  std::vector<double> out(gains.rows());
  const auto d = alloc.d();
  for (std::size_t i = 0; i < gains.rows(); ++i) {
    const auto row = gains.row(i);
    double q = 0.0;
    for (std::size_t k = 0; k < row.size(); ++k) q += d[k] * std::norm(row[k]);
    out[i] = q;
  }
  return out;
}

std::vector<Complex> random_unitary(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_unitary: n must be >= 1");
  const auto size = static_cast<std::size_t>(n);
  std::vector<Complex> draws(size * size);
  sampling::fill_gain_chunk(sampling::stream_key(seed, sampling::StreamTag::unitary), 0, size, n,
                            1.0, draws);
  Eigen::MatrixXcd z(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) z(r, c) = draws[static_cast<std::size_t>(r * n + c)];

  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k) {
    const Complex diag = r(k, k);
    const double mag = std::abs(diag);
    if (mag > 0.0) q.col(k) *= diag / mag;
  }

  std::vector<Complex> out(size * size);
  for (int r2 = 0; r2 < n; ++r2)
    for (int c = 0; c < n; ++c) out[static_cast<std::size_t>(r2 * n + c)] = q(r2, c);
  return out;
}

ComplexGainMatrix rotate(const ComplexGainMatrix& gains, std::span<const Complex> unitary) {
  const std::size_t n = gains.cols();
  if (unitary.size() != n * n)
    throw std::invalid_argument("rotate: unitary size does not match gain columns");
  ComplexGainMatrix out(gains.rows(), n, gains.scale());
  for (std::size_t i = 0; i < gains.rows(); ++i) {
    const auto g = gains.row(i);
    auto dst = out.row(i);
    // (U^H g)_j = sum_k conj(U_kj) g_k
    for (std::size_t j = 0; j < n; ++j) {
      Complex acc{0.0, 0.0};
      for (std::size_t k = 0; k < n; ++k) acc += std::conj(unitary[k * n + j]) * g[k];
      dst[j] = acc;
    }
  }
  return out;
}

}  // namespace misose
