#ifndef HBVM_PARTITION_HPP
#define HBVM_PARTITION_HPP

#include <cstddef>
#include <vector>

#include "hbvm/linalg.hpp"
#include "hbvm/tableau.hpp"

namespace hbvm {

/// Stage blocks hold one stage per row and one state component per column,
/// so (K (x) I_2m) y is simply K * y.
using StageBlock = Matrix;

/// Split of the k stages into s fundamental and k-s silent ones, together
/// with the blocks of the reduced (block size s) discrete problem:
///
///   y2 = u_hat (x) y0 + A1 y1,            A1 = I_s2 I_s1^{-1},
///   y1 = e (x) y0 + h [B1 f(y1) + B2 f(y2)],
///   C  = B1 + B2 A1.
///
/// All indices are 0-based.
struct StagePartition {
  HbvmTableau tableau;
  std::vector<std::size_t> fund_idx;
  std::vector<std::size_t> silent_idx;
  Matrix A1;     // (k-s) x s
  Vector u_hat;  // k-s
  Matrix B1;     // s x s
  Matrix B2;     // s x (k-s)
  Matrix C;      // s x s

  std::size_t k() const noexcept { return std::size_t(tableau.k); }
  std::size_t s() const noexcept { return std::size_t(tableau.s); }
};

enum class Selection { RuleOfThumb, FirstS };

/// Picks the fundamental abscissae: for each target j/(s+1), j = 1..s, the
/// closest node (ties go to the lower index). Requires k - s even unless
/// `allow_odd_gap` is set, in which case each target takes the closest node
/// not yet chosen and the result may be asymmetric.
///
/// Throws ParityError for an odd gap and SelectionError when two targets
/// land on the same node.
std::vector<std::size_t> select_fundamental(const std::vector<double>& nodes, int s, bool allow_odd_gap = false);

/// {0, ..., s-1}.
std::vector<std::size_t> first_s_indices(int s);

/// Throws PartitionRejected when I_s1 is singular and InvalidArgument for a
/// malformed index list.
StagePartition build_partition(const HbvmTableau& tab, std::vector<std::size_t> fund_idx);

/// Convenience: Gauss nodes, chosen selection strategy. An odd gap k - s
/// falls back to the permissive rule-of-thumb; the method itself does not
/// depend on which stages are fundamental.
StagePartition make_partition(int k, int s, Selection selection = Selection::RuleOfThumb);

/// y2 = u_hat (x) y0 + A1 y1 for a fundamental block y1 (s x 2m).
StageBlock silent_from_fundamental(const StagePartition& part, std::span<const double> y0, const StageBlock& y1);

/// Reassembles all k stages in node order from the fundamental block and the
/// silent block.
StageBlock assemble_stages(const StagePartition& part, const StageBlock& y1, const StageBlock& y2);

/// sigma_max / sigma_min; +inf when M is numerically singular.
double condition_number(const Matrix& m);

}  // namespace hbvm

#endif  // HBVM_PARTITION_HPP
