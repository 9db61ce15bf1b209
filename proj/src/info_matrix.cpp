// Copyright 2026 The robustdist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "robustdist/info_matrix.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace robustdist {

namespace {

Eigen::VectorXd eigenvalues_of(const ChannelInfoMatrix& m) {
  const int d = m.half_k();
  Eigen::MatrixXd mat(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) mat(i, j) = m.entry(i, j);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(mat, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("ChannelInfoMatrix: eigenvalue computation failed");
  }
  return solver.eigenvalues();
}

}  // namespace

ChannelInfoMatrix::ChannelInfoMatrix(int k, std::vector<double> entries)
    : k_(k), entries_(std::move(entries)) {
  if (k_ < 2 || k_ % 2 != 0) {
    throw std::invalid_argument("ChannelInfoMatrix: k must be even and >= 2");
  }
  const auto d = static_cast<size_t>(k_ / 2);
  if (entries_.size() != d * d) {
    throw std::invalid_argument("ChannelInfoMatrix: expected (k/2)^2 entries");
  }
  for (size_t i = 0; i < d; ++i) {
    for (size_t j = i + 1; j < d; ++j) {
      if (std::abs(entries_[i * d + j] - entries_[j * d + i]) > 1e-9) {
        throw std::invalid_argument("ChannelInfoMatrix: matrix is not symmetric");
      }
    }
  }
}

double ChannelInfoMatrix::trace() const noexcept {
  double t = 0.0;
  for (int i = 0; i < half_k(); ++i) t += entry(i, i);
  return t;
}

double ChannelInfoMatrix::min_eigenvalue() const {
  return eigenvalues_of(*this).minCoeff();
}

ChannelInfoMatrix channel_info_matrix(const Channel& w) {
  const int k = w.k();
  if (k % 2 != 0) {
    throw std::invalid_argument("channel_info_matrix: k must be even");
  }
  const int d = k / 2;
  const int ys = w.y_size();
  std::vector<double> col_sum(static_cast<size_t>(ys), 0.0);
  for (int x = 0; x < k; ++x) {
    const auto row = w.row(x);
    for (int y = 0; y < ys; ++y) col_sum[static_cast<size_t>(y)] += row[static_cast<size_t>(y)];
  }
  // diff[i][y] = W(y | pair i, first) - W(y | pair i, second)
  std::vector<double> diff(static_cast<size_t>(d) * static_cast<size_t>(ys));
  for (int i = 0; i < d; ++i) {
    const auto top = w.row(2 * i);
    const auto bottom = w.row(2 * i + 1);
    for (int y = 0; y < ys; ++y) {
      diff[static_cast<size_t>(i) * static_cast<size_t>(ys) + static_cast<size_t>(y)] =
          top[static_cast<size_t>(y)] - bottom[static_cast<size_t>(y)];
    }
  }
  std::vector<double> h(static_cast<size_t>(d) * static_cast<size_t>(d), 0.0);
  for (int y = 0; y < ys; ++y) {
    const double denom = col_sum[static_cast<size_t>(y)];
    if (denom <= 0.0) continue;  // output never emitted; contributes nothing
    for (int i = 0; i < d; ++i) {
      const double di = diff[static_cast<size_t>(i) * static_cast<size_t>(ys) + static_cast<size_t>(y)];
      if (di == 0.0) continue;
      for (int j = i; j < d; ++j) {
        const double dj = diff[static_cast<size_t>(j) * static_cast<size_t>(ys) + static_cast<size_t>(y)];
        h[static_cast<size_t>(i) * static_cast<size_t>(d) + static_cast<size_t>(j)] += di * dj / denom;
      }
    }
  }
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < i; ++j) {
      h[static_cast<size_t>(i) * static_cast<size_t>(d) + static_cast<size_t>(j)] =
          h[static_cast<size_t>(j) * static_cast<size_t>(d) + static_cast<size_t>(i)];
    }
  }
  return ChannelInfoMatrix(k, std::move(h));
}

double trace_norm(const ChannelInfoMatrix& m) {
  const auto eigenvalues = eigenvalues_of(m);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) sum += std::abs(eigenvalues[i]);
  return sum;
}

}  // namespace robustdist
