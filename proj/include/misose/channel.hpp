#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace misose {

using Complex = std::complex<double>;

enum class Side { legitimate, eavesdropper };

/// MISOSE Rayleigh ensemble: h ~ CN(0, sigma_h^2 I), g ~ CN(0, sigma_g^2 I).
/// Each complex entry has real and imaginary parts N(0, sigma^2 / 2).
class ChannelModel {
 public:
  ChannelModel(int n_t, double sigma_h, double sigma_g);

  int n_t() const { return n_t_; }
  double sigma_h() const { return sigma_h_; }
  double sigma_g() const { return sigma_g_; }
  double scale(Side side) const {
    return side == Side::legitimate ? sigma_h_ : sigma_g_;
  }

  /// sigma_g^2 / sigma_h^2. Positive capacity requires ratio_a() < 1.
  double ratio_a() const { return (sigma_g_ * sigma_g_) / (sigma_h_ * sigma_h_); }
  bool degraded() const { return sigma_h_ > sigma_g_; }

  ChannelModel with_antennas(int n_t) const { return {n_t, sigma_h_, sigma_g_}; }

 private:
  int n_t_;
  double sigma_h_;
  double sigma_g_;
};

/// Diagonal of D (eigenvalues of the input covariance) and the power budget.
class PowerAllocation {
 public:
  PowerAllocation(std::vector<double> d, double budget);

  static PowerAllocation uniform(int n_t, double budget);
  /// All power on the first antenna.
  static PowerAllocation single(int n_t, double budget);
  static PowerAllocation zeros(int n_t);

  std::span<const double> d() const { return d_; }
  double operator[](std::size_t k) const { return d_[k]; }
  std::size_t size() const { return d_.size(); }
  double budget() const { return budget_; }
  double total() const;

 private:
  std::vector<double> d_;
  double budget_;
};

/// A Monte Carlo estimate in bits. Deterministic methods report std_error 0.
struct RateEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
};

/// Row-major batch of channel draws: rows are samples, columns antennas.
class ComplexGainMatrix {
 public:
  ComplexGainMatrix(std::size_t rows, std::size_t cols, double scale);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double scale() const { return scale_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  std::span<const Complex> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<Complex> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Complex> data() const { return data_; }
  std::span<Complex> data() { return data_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  double scale_;
  std::vector<Complex> data_;
};

/// count independent draws of the chosen side's channel. Pure function of
/// (model, side, count, seed); the thread count does not change the result.
ComplexGainMatrix sample_channel(const ChannelModel& model, Side side, std::size_t count,
                                 std::uint64_t seed);

/// Per row: sum_k d_k |g_{i,k}|^2.
std::vector<double> quadratic_form(const ComplexGainMatrix& gains,
                                   const PowerAllocation& alloc);

/// Haar-distributed n x n unitary (row-major), from the QR factorization of a
/// complex Gaussian matrix with R's diagonal made real positive.
std::vector<Complex> random_unitary(int n, std::uint64_t seed);

/// Returns U^H g for every row g of gains, i.e. the channel seen by the
/// rotated covariance U D U^H.
ComplexGainMatrix rotate(const ComplexGainMatrix& gains, std::span<const Complex> unitary);

}  // namespace misose
