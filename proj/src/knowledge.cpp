#include "robustcheck/knowledge.hpp"

#include <algorithm>
#include <optional>
#include <unordered_map>

namespace robustcheck {

std::uint32_t event_code(const Event& e, int N) {
  switch (e.kind) {
    case Event::Kind::Term: return kTermCode;
    case Event::Kind::Div: return kDivCode;
    default: return static_cast<std::uint32_t>(e.var) * static_cast<std::uint32_t>(N) + static_cast<std::uint32_t>(e.value);
  }
}

namespace {

// Low projection of one run as head + optional infinite cycle.
struct LowSeq {
  std::vector<std::uint32_t> head;
  std::vector<std::uint32_t> cycle;

  std::optional<std::uint32_t> at(size_t i) const {
    if (i < head.size()) return head[i];
    if (cycle.empty()) return std::nullopt;
    return cycle[(i - head.size()) % cycle.size()];
  }

  bool matches(const std::vector<std::uint32_t>& l) const {
    for (size_t i = 0; i < l.size(); ++i) {
      auto v = at(i);
      if (!v || *v != l[i]) return false;
    }
    return true;
  }
};

std::vector<std::uint32_t> codes_of(const Trace& low, int N) {
  std::vector<std::uint32_t> out;
  out.reserve(low.size());
  for (const auto& e : low) out.push_back(event_code(e, N));
  return out;
}

LowSeq low_seq(const RunResult& r, const SecurityEnv& env, int N, Mode mode) {
  LowSeq s;
  for (const auto& e : low_projection(r.prefix, env, mode)) s.head.push_back(event_code(e, N));
  if (r.diverged()) {
    for (const auto& e : low_projection(r.lasso, env, mode)) s.cycle.push_back(event_code(e, N));
    if (s.cycle.empty() && mode == Mode::PS) s.head.push_back(kDivCode);
  }
  return s;
}

template <typename Pred>
MemorySet select(const CmdPtr& c, const SecurityEnv& env, int N, const Memory& m, Pred&& keep) {
  MemorySpace space(env, N);
  Machine machine(c, env, N);
  size_t pub = space.public_index(m);
  MemorySet out;
  for (size_t s = 0; s < space.secret_count(); ++s) {
    Memory mm = space.compose(pub, s);
    RunResult r = machine.run(mm);
    if (keep(r)) out.push_back(std::move(mm));
  }
  return out;
}

}  // namespace

MemorySet knowledge(const CmdPtr& c, const SecurityEnv& env, int N, const Memory& m, const Trace& low, Mode mode) {
  auto l = codes_of(low, N);
  return select(c, env, N, m, [&](const RunResult& r) { return low_seq(r, env, N, mode).matches(l); });
}

MemorySet progress_knowledge(const CmdPtr& c, const SecurityEnv& env, int N, const Memory& m, const Trace& low,
                             Mode mode) {
  auto l = codes_of(low, N);
  return select(c, env, N, m, [&](const RunResult& r) {
    auto s = low_seq(r, env, N, mode);
    return s.matches(l) && s.at(l.size()).has_value();
  });
}

MemorySet divergence_knowledge(const CmdPtr& c, const SecurityEnv& env, int N, const Memory& m, const Trace& low) {
  auto l = codes_of(low, N);
  return select(c, env, N, m,
                [&](const RunResult& r) { return r.diverged() && low_seq(r, env, N, Mode::PS).matches(l); });
}

bool classify_release(const CmdPtr& c, const SecurityEnv& env, int N, const Memory& m, const Trace& prefix,
                      const Event& r, Mode mode) {
  Trace longer = prefix;
  longer.push_back(r);
  size_t after = knowledge(c, env, N, m, longer, mode).size();
  size_t before = mode == Mode::PS ? knowledge(c, env, N, m, prefix, mode).size()
                                   : progress_knowledge(c, env, N, m, prefix, mode).size();
  return before > after;
}

bool pini_segment(const CmdPtr& c, const SecurityEnv& env, int N, const Memory& m, const Trace& tr_from,
                  const Trace& tr_to) {
  Trace from = low_projection(tr_from, env, Mode::PI);
  Trace to = low_projection(tr_to, env, Mode::PI);
  for (size_t i = from.size(); i < to.size(); ++i) {
    Trace li(to.begin(), to.begin() + static_cast<long>(i));
    Trace next(to.begin(), to.begin() + static_cast<long>(i + 1));
    if (progress_knowledge(c, env, N, m, li, Mode::PI).size() != knowledge(c, env, N, m, next, Mode::PI).size())
      return false;
  }
  return true;
}

// ---- block construction ----

int LabelTable::id(const std::string& label) {
  auto [it, fresh] = ids_.try_emplace(label, static_cast<int>(names_.size()));
  if (fresh) names_.push_back(label);
  return it->second;
}

namespace {

struct Shape {
  size_t prefix_low = 0, cycle_low = 0, prefix_tr = 0, cycle_tr = 0;
};

Shape shape_of(const RunResult& r, const SecurityEnv& env) {
  Shape s;
  auto count = [&](const Trace& t, size_t& low, size_t& tr) {
    for (const auto& e : t) {
      if (e.kind == Event::Kind::Assign || e.kind == Event::Kind::Endorse) {
        Level l = env.level(e.var);
        if (is_public(l)) ++low;
        if (is_trusted(l)) ++tr;
      } else if (e.kind == Event::Kind::Term) {
        ++low;
        ++tr;
      }
    }
  };
  count(r.prefix, s.prefix_low, s.prefix_tr);
  count(r.lasso, s.cycle_low, s.cycle_tr);
  return s;
}

RunInfo summarize(const RunResult& r, const Shape& sh, const SecurityEnv& env, int N, Mode mode, size_t low_need,
                  size_t tr_need, LabelTable& labels) {
  RunInfo info;
  info.terminated = r.terminated();
  info.diverged = r.diverged();

  std::vector<std::uint32_t> low_before, tr_before;  // counts before each stream position
  std::uint32_t n_endorse = 0, n_checked = 0;

  auto feed = [&](const Event& e) {
    low_before.push_back(static_cast<std::uint32_t>(info.low.size()));
    tr_before.push_back(static_cast<std::uint32_t>(info.trusted.size()));
    switch (e.kind) {
      case Event::Kind::Checked:
        info.checked.push_back({labels.id(e.label), e.value, e.branch});
        ++n_checked;
        return;
      case Event::Kind::Endorse:
        info.endorse.push_back({labels.id(e.label), e.value, 0});
        ++n_endorse;
        [[fallthrough]];
      case Event::Kind::Assign: {
        Level l = env.level(e.var);
        std::uint32_t code = event_code(e, N);
        if (is_public(l)) {
          info.low.push_back(code);
          info.low_endorse.push_back(n_endorse);
          info.low_checked.push_back(n_checked);
        }
        if (is_trusted(l)) {
          info.trusted.push_back(code);
          info.trusted_endorse.push_back(n_endorse);
        }
        return;
      }
      case Event::Kind::Term:
        info.low.push_back(kTermCode);
        info.low_endorse.push_back(n_endorse);
        info.low_checked.push_back(n_checked);
        info.trusted.push_back(kTermCode);
        info.trusted_endorse.push_back(n_endorse);
        return;
      case Event::Kind::Div: return;
    }
  };

  for (const auto& e : r.prefix) feed(e);
  size_t reps = 0;
  if (r.diverged() && !r.lasso.empty()) {
    while (reps < 10000 && (reps < 2 || (sh.cycle_low > 0 && info.low.size() < low_need) ||
                            (sh.cycle_tr > 0 && info.trusted.size() < tr_need))) {
      for (const auto& e : r.lasso) feed(e);
      ++reps;
    }
  }
  size_t stream_len = low_before.size();
  low_before.push_back(static_cast<std::uint32_t>(info.low.size()));
  tr_before.push_back(static_cast<std::uint32_t>(info.trusted.size()));

  auto add_segment = [&](size_t entry, size_t exit) {
    if (exit > stream_len) return;
    info.segments.push_back({low_before[entry], low_before[exit], tr_before[exit] != tr_before[entry]});
  };
  for (size_t i = 0; i < r.marks.size(); ++i) {
    const auto& mk = r.marks[i];
    if (!mk.exit) continue;
    if (i < r.prefix_marks) {
      add_segment(mk.entry, *mk.exit);
    } else {
      for (size_t k = 0; k < std::max<size_t>(reps, 1); ++k)
        add_segment(mk.entry + k * r.lasso.size(), *mk.exit + k * r.lasso.size());
    }
  }

  info.low_complete = r.terminated() || sh.cycle_low == 0;
  info.trusted_complete = r.terminated() || sh.cycle_tr == 0;
  if (!info.low_complete && info.low.size() > low_need) {
    info.low.resize(low_need);
    info.low_endorse.resize(low_need);
    info.low_checked.resize(low_need);
  }
  if (!info.trusted_complete && info.trusted.size() > tr_need) {
    info.trusted.resize(tr_need);
    info.trusted_endorse.resize(tr_need);
  }
  if (r.diverged() && sh.cycle_low == 0 && mode == Mode::PS) {
    info.low.push_back(kDivCode);
    info.low_endorse.push_back(n_endorse);
    info.low_checked.push_back(n_checked);
  }
  return info;
}

// Knowledge counts for all runs of one world.
void count_knowledge(std::vector<RunInfo>& world) {
  struct Node {
    std::uint32_t count = 0, ext = 0, div = 0;
  };
  std::vector<Node> nodes(1);
  std::unordered_map<std::uint64_t, std::uint32_t> child;
  std::vector<std::vector<std::uint32_t>> paths(world.size());

  for (size_t s = 0; s < world.size(); ++s) {
    const RunInfo& r = world[s];
    auto& path = paths[s];
    path.reserve(r.low.size() + 1);
    std::uint32_t node = 0;
    path.push_back(node);
    for (std::uint32_t code : r.low) {
      std::uint64_t key = (static_cast<std::uint64_t>(node) << 32) | code;
      auto [it, fresh] = child.try_emplace(key, static_cast<std::uint32_t>(nodes.size()));
      if (fresh) nodes.emplace_back();
      node = it->second;
      path.push_back(node);
    }
    for (size_t j = 0; j < path.size(); ++j) {
      Node& n = nodes[path[j]];
      ++n.count;
      if (j + 1 < path.size() || !r.low_complete) ++n.ext;
      if (r.diverged) ++n.div;
    }
  }
  for (size_t s = 0; s < world.size(); ++s) {
    RunInfo& r = world[s];
    const auto& path = paths[s];
    r.k.resize(path.size());
    r.kprog.resize(path.size());
    r.kdiv.resize(path.size());
    for (size_t j = 0; j < path.size(); ++j) {
      const Node& n = nodes[path[j]];
      r.k[j] = n.count;
      r.kprog[j] = n.ext;
      r.kdiv[j] = n.div;
    }
  }
}

}  // namespace

Block build_block(const std::vector<Machine>& machines, const MemorySpace& space, const SecurityEnv& env,
                  size_t pub, Mode mode, LabelTable& labels) {
  const size_t S = space.secret_count();
  const int N = space.domain();
  std::vector<Memory> mems;
  mems.reserve(S);
  for (size_t s = 0; s < S; ++s) mems.push_back(space.compose(pub, s));

  std::vector<RunResult> results;
  std::vector<Shape> shapes;
  results.reserve(machines.size() * S);
  Shape most;
  for (const auto& mach : machines) {
    for (size_t s = 0; s < S; ++s) {
      results.push_back(mach.run(mems[s]));
      Shape sh = shape_of(results.back(), env);
      most.prefix_low = std::max(most.prefix_low, sh.prefix_low);
      most.cycle_low = std::max(most.cycle_low, sh.cycle_low);
      most.prefix_tr = std::max(most.prefix_tr, sh.prefix_tr);
      most.cycle_tr = std::max(most.cycle_tr, sh.cycle_tr);
      shapes.push_back(sh);
    }
  }
  // Eventually periodic sequences agreeing this far agree forever; twice
  // that leaves room for alignments that skip events of the other run.
  size_t low_need = 2 * (most.prefix_low + 2 * most.cycle_low + 1);
  size_t tr_need = 2 * (most.prefix_tr + 2 * most.cycle_tr + 1);

  Block block;
  block.pub = pub;
  block.runs.resize(machines.size());
  for (size_t a = 0; a < machines.size(); ++a) {
    auto& world = block.runs[a];
    world.reserve(S);
    for (size_t s = 0; s < S; ++s) {
      size_t i = a * S + s;
      world.push_back(summarize(results[i], shapes[i], env, N, mode, low_need, tr_need, labels));
      results[i] = RunResult{};
    }
    count_knowledge(world);
  }
  return block;
}

}  // namespace robustcheck
