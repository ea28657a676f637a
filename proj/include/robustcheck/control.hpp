#pragma once

#include <optional>
#include <vector>

#include "robustcheck/attacks.hpp"

namespace robustcheck {

// Boundaries p_1 < ... < p_N over a run's low events. A boundary at 0 lets
// the first event start a segment of its own.
struct Segmentation {
  std::vector<size_t> boundaries;
  size_t size() const { return boundaries.size(); }
};

// ---- run-level primitives (runs summarized in one Block) ----

// Boundaries placed right before every release event, closed by the length.
Segmentation canonical_segmentation(const RunInfo& r, size_t len, Mode mode);

// ok[n] is set iff the first `len` low events of ta are similar to the first
// n low events of tb (0 <= n <= tb.low.size()).
void similar_lengths(const RunInfo& ta, size_t len, const RunInfo& tb, Mode mode, std::vector<char>& ok);

bool similar_runs(const RunInfo& ta, size_t len_a, const RunInfo& tb, size_t len_b, Mode mode);

// Membership of tb in attacker control / release control of ta's first `len` low events.
bool in_attacker_control(const RunInfo& ta, size_t len, const RunInfo& tb, Mode mode);
bool in_release_control(const RunInfo& ta, size_t len, const RunInfo& tb, Mode mode);

// ---- program-level operations ----

// Canonical segmentation of the run of p[a] on m.
Segmentation canonical_segmentation(const Program& p, const Memory& m, const AttackVector& a, Mode mode);

// Similarity of the complete runs of p[a] and p[b] on m.
bool similar(const Program& p, const Memory& m, const AttackVector& a, const AttackVector& b, Mode mode);

// Brute force over every pair of segmentations, with knowledge computed as
// explicit memory sets. Lengths default to the whole low sequence. Throws
// ScaleError beyond 8 low events or on an infinite low sequence.
bool similar_oracle(const Program& p, const Memory& m, const AttackVector& a, const AttackVector& b, Mode mode,
                    std::optional<size_t> len_a = std::nullopt, std::optional<size_t> len_b = std::nullopt);

inline constexpr size_t kOracleMaxEvents = 8;

// similar_oracle for every ordered pair of `attacks` on m, computing each
// run's knowledge once. Entries are 1/0, or -1 when either run is beyond the
// oracle's scale.
std::vector<std::vector<int>> similar_oracle_all(const Program& p, const Memory& m,
                                                 const std::vector<AttackVector>& attacks, Mode mode);

// Control sets over the fair attack universe for the first `len` low events
// of a's run (default: all of them).
std::vector<AttackVector> attacker_control(const Program& p, const Memory& m, const AttackVector& a, Mode mode,
                                           const AttackConfig& cfg, std::optional<size_t> len = std::nullopt);
std::vector<AttackVector> release_control(const Program& p, const Memory& m, const AttackVector& a, Mode mode,
                                          const AttackConfig& cfg, std::optional<size_t> len = std::nullopt);

}  // namespace robustcheck
