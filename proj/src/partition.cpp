#include "hbvm/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hbvm/errors.hpp"

namespace hbvm {

std::vector<std::size_t> first_s_indices(int s) {
  std::vector<std::size_t> idx(std::size_t(std::max(s, 0)));
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  return idx;
}

std::vector<std::size_t> select_fundamental(const std::vector<double>& nodes, int s, bool allow_odd_gap) {
  const int k = int(nodes.size());
  if (s < 1 || s > k)
    throw InvalidArgument("select_fundamental: need 1 <= s <= k, got k = " + std::to_string(k) + ", s = " + std::to_string(s));
  if ((k - s) % 2 != 0 && !allow_odd_gap)
    throw ParityError("select_fundamental: k - s = " + std::to_string(k - s) + " is odd");

  std::vector<std::size_t> chosen;
  if (k == s) {
    for (std::size_t i = 0; i < nodes.size(); ++i) chosen.push_back(i);
    return chosen;
  }
  std::vector<int> owner(nodes.size(), 0);
  for (int j = 1; j <= s; ++j) {
    const double target = double(j) / double(s + 1);
    std::size_t best = nodes.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (allow_odd_gap && owner[i] != 0) continue;
      const double d = std::abs(nodes[i] - target);
      if (d < best_dist) {
        best_dist = d;
        best = i;
      }
    }
    if (owner[best] != 0)
      throw SelectionError("select_fundamental: targets " + std::to_string(owner[best]) + "/" + std::to_string(s + 1) +
                           " and " + std::to_string(j) + "/" + std::to_string(s + 1) + " share node " +
                           std::to_string(best));
    owner[best] = j;
    chosen.push_back(best);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

StagePartition build_partition(const HbvmTableau& tab, std::vector<std::size_t> fund_idx) {
  const std::size_t k = std::size_t(tab.k);
  const std::size_t s = std::size_t(tab.s);
  std::sort(fund_idx.begin(), fund_idx.end());
  if (fund_idx.size() != s) throw InvalidArgument("build_partition: expected exactly s fundamental indices");
  if (std::adjacent_find(fund_idx.begin(), fund_idx.end()) != fund_idx.end())
    throw InvalidArgument("build_partition: repeated fundamental index");
  if (!fund_idx.empty() && fund_idx.back() >= k) throw InvalidArgument("build_partition: fundamental index out of range");

  StagePartition part;
  part.tableau = tab;
  part.fund_idx = fund_idx;
  for (std::size_t i = 0, f = 0; i < k; ++i) {
    if (f < s && fund_idx[f] == i)
      ++f;
    else
      part.silent_idx.push_back(i);
  }
  const std::size_t r = k - s;

  Matrix i1(s, s), p1(s, s), i2(r, s), p2(r, s);
  for (std::size_t a = 0; a < s; ++a)
    for (std::size_t j = 0; j < s; ++j) {
      i1(a, j) = tab.mat_I(fund_idx[a], j);
      p1(a, j) = tab.mat_P(fund_idx[a], j);
    }
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t j = 0; j < s; ++j) {
      i2(a, j) = tab.mat_I(part.silent_idx[a], j);
      p2(a, j) = tab.mat_P(part.silent_idx[a], j);
    }

  // A1 = I_s2 I_s1^{-1}, i.e. I_s1^T A1^T = I_s2^T.
  const LuFactorization<double> lu_t(i1.transposed());
  if (lu_t.singular()) throw PartitionRejected("build_partition: fundamental block of the integral matrix is singular");
  part.A1 = lu_t.solve(i2.transposed()).transposed();

  part.u_hat.assign(r, 1.0);
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t j = 0; j < s; ++j) part.u_hat[a] -= part.A1(a, j);

  Matrix p1t_w1 = p1.transposed();
  for (std::size_t j = 0; j < s; ++j)
    for (std::size_t a = 0; a < s; ++a) p1t_w1(j, a) *= tab.omega[fund_idx[a]];
  Matrix p2t_w2 = p2.transposed();
  for (std::size_t j = 0; j < s; ++j)
    for (std::size_t a = 0; a < r; ++a) p2t_w2(j, a) *= tab.omega[part.silent_idx[a]];

  part.B1 = i1 * p1t_w1;
  part.B2 = r == 0 ? Matrix(s, 0) : i1 * p2t_w2;
  part.C = r == 0 ? part.B1 : part.B1 + part.B2 * part.A1;
  return part;
}

StagePartition make_partition(int k, int s, Selection selection) {
  HbvmTableau tab = build_gauss_tableau(k, s);
  auto idx = selection == Selection::RuleOfThumb ? select_fundamental(tab.nodes(), s, (k - s) % 2 != 0) : first_s_indices(s);
  return build_partition(tab, std::move(idx));
}

StageBlock silent_from_fundamental(const StagePartition& part, std::span<const double> y0, const StageBlock& y1) {
  const std::size_t dim = y0.size();
  if (y1.rows() != part.s() || y1.cols() != dim)
    throw InvalidArgument("silent_from_fundamental: fundamental block must be s x dim(y0)");
  const std::size_t r = part.silent_idx.size();
  StageBlock y2 = r == 0 ? StageBlock(0, dim) : part.A1 * y1;
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t c = 0; c < dim; ++c) y2(a, c) += part.u_hat[a] * y0[c];
  return y2;
}

StageBlock assemble_stages(const StagePartition& part, const StageBlock& y1, const StageBlock& y2) {
  const std::size_t dim = y1.cols();
  if (y1.rows() != part.s() || y2.rows() != part.silent_idx.size() || (y2.rows() > 0 && y2.cols() != dim))
    throw InvalidArgument("assemble_stages: block shapes do not match the partition");
  StageBlock all(part.k(), dim);
  for (std::size_t a = 0; a < part.fund_idx.size(); ++a)
    for (std::size_t c = 0; c < dim; ++c) all(part.fund_idx[a], c) = y1(a, c);
  for (std::size_t a = 0; a < part.silent_idx.size(); ++a)
    for (std::size_t c = 0; c < dim; ++c) all(part.silent_idx[a], c) = y2(a, c);
  return all;
}

double condition_number(const Matrix& m) {
  if (m.rows() != m.cols() || m.empty()) throw InvalidArgument("condition_number: need a nonempty square matrix");
  const Vector sigma = singular_values(m);
  const double smax = sigma.front();
  const double smin = sigma.back();
  if (smax == 0.0 || smin <= double(m.rows()) * std::numeric_limits<double>::epsilon() * smax)
    return std::numeric_limits<double>::infinity();
  return smax / smin;
}

}  // namespace hbvm
