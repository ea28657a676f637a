#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "robustcheck/semantics.hpp"

namespace robustcheck {

// Explicit memory sets, ordered by MemorySpace index.
using MemorySet = std::vector<Memory>;

// ---- set-valued queries (reference implementation) ----
// `low` is a low event sequence as produced by low_projection. Only the
// public part of `m` is used.

MemorySet knowledge(const CmdPtr& c, const SecurityEnv& env, int N, const Memory& m, const Trace& low, Mode mode);
MemorySet progress_knowledge(const CmdPtr& c, const SecurityEnv& env, int N, const Memory& m, const Trace& low,
                             Mode mode);
// Memories producing `low` whose run diverges at some point afterwards.
MemorySet divergence_knowledge(const CmdPtr& c, const SecurityEnv& env, int N, const Memory& m, const Trace& low);

// Whether r, following `prefix` in the low projection of c's run on m, is a
// release event.
bool classify_release(const CmdPtr& c, const SecurityEnv& env, int N, const Memory& m, const Trace& prefix,
                      const Event& r, Mode mode);

// Progress-insensitive noninterference along the low events that tr_to adds
// to tr_from (both full traces of c's run on m).
bool pini_segment(const CmdPtr& c, const SecurityEnv& env, int N, const Memory& m, const Trace& tr_from,
                  const Trace& tr_to);

// ---- compact run summaries used by the decision procedures ----

inline constexpr std::uint32_t kTermCode = 0xFFFFFFFFu;
inline constexpr std::uint32_t kDivCode = 0xFFFFFFFEu;

// Code of an Assign/Endorse/Term/Div event for prefix comparison.
std::uint32_t event_code(const Event& e, int N);

struct LabelledValue {
  int label = 0;
  int value = 0;
  int branch = 0;  // checked events only
  bool operator==(const LabelledValue&) const = default;
};

struct AttackSegment {
  std::uint32_t entry_low = 0;
  std::uint32_t exit_low = 0;
  bool trusted_inside = false;
};

// One run with its infinite parts unrolled far enough for every comparison
// made within its block, plus knowledge counts along its low events.
struct RunInfo {
  bool terminated = false;
  bool diverged = false;

  std::vector<std::uint32_t> low;  // codes; ends with Term (or Div in PS) when complete
  bool low_complete = true;
  // Per low position j (0..low.size()): |K_j|, |K->_j| and |K_j restricted to diverging runs|.
  std::vector<std::uint32_t> k, kprog, kdiv;
  // Per low event i: number of endorse / checked events emitted up to and including it.
  std::vector<std::uint32_t> low_endorse, low_checked;

  std::vector<LabelledValue> endorse;
  std::vector<LabelledValue> checked;

  std::vector<std::uint32_t> trusted;
  bool trusted_complete = true;
  std::vector<std::uint32_t> trusted_endorse;

  std::vector<AttackSegment> segments;  // completed attack brackets

  // Release at 1-based low position j.
  bool release(size_t j, Mode mode) const {
    return mode == Mode::PS ? k[j - 1] > k[j] : kprog[j - 1] > k[j];
  }
};

class LabelTable {
 public:
  int id(const std::string& label);
  const std::string& name(int id) const { return names_[static_cast<size_t>(id)]; }

 private:
  std::map<std::string, int> ids_;
  std::vector<std::string> names_;
};

// All runs sharing one public memory: runs[attack][secret index].
struct Block {
  size_t pub = 0;
  std::vector<std::vector<RunInfo>> runs;
};

// Runs every machine on every memory with public part `pub` and summarizes.
Block build_block(const std::vector<Machine>& machines, const MemorySpace& space, const SecurityEnv& env,
                  size_t pub, Mode mode, LabelTable& labels);

}  // namespace robustcheck
