#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>

#include "bcaret/engine.hpp"

namespace bcaret {

const char* game_result_name(GameResult r) {
  switch (r) {
    case GameResult::Accept: return "ACCEPT";
    case GameResult::Reject: return "REJECT";
    case GameResult::Unknown: return "UNKNOWN";
  }
  return "?";
}

namespace {

// Explicit run-construction game. The run builder picks a rule at each
// configuration, the opponent picks which branch of the target set to
// follow. The builder wins a play that passes accepting controls infinitely
// often. Configurations past the height bound become sinks whose value is
// fixed by `optimistic`.
struct Arena {
  struct Node {
    bool builder_moves = true;
    bool in_f = false;
    bool overflow = false;
    std::vector<int> edges;
  };
  std::vector<Node> nodes;
  std::vector<std::vector<int>> preds;
  bool any_overflow = false;
  int start = -1;

  void finish_edges() {
    preds.resize(nodes.size());
    for (std::size_t v = 0; v < nodes.size(); ++v)
      for (int w : nodes[v].edges) preds[w].push_back(static_cast<int>(v));
  }
};

Arena build_arena(const Abpds& bp, const Config& c, int bound) {
  Arena a;
  std::map<Config, int> ids;
  std::vector<Config> cfg_of;  // parallel to a.nodes; opponent entries are placeholders
  std::deque<int> work;
  auto intern = [&](const Config& cfg) {
    auto it = ids.find(cfg);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(a.nodes.size());
    ids.emplace(cfg, id);
    a.nodes.emplace_back();
    cfg_of.push_back(cfg);
    work.push_back(id);
    return id;
  };
  a.start = intern(c);
  while (!work.empty()) {
    int id = work.front();
    work.pop_front();
    const Config cfg = cfg_of[id];
    if (static_cast<int>(cfg.stack.size()) > bound) {
      a.nodes[id].overflow = true;
      a.any_overflow = true;
      a.nodes[id].edges.push_back(id);
      continue;
    }
    auto succs = abpds_successor_sets(bp, cfg);
    if (succs.empty()) {
      // stuck builder: a self-loop outside F makes the play losing
      a.nodes[id].edges.push_back(id);
      continue;
    }
    a.nodes[id].in_f = bp.is_accepting(cfg.control);
    for (auto& [ri, branch] : succs) {
      int anode = static_cast<int>(a.nodes.size());
      a.nodes.emplace_back();
      cfg_of.emplace_back();
      a.nodes[anode].builder_moves = false;
      std::vector<int> targets;
      for (const Config& nxt : branch) targets.push_back(intern(nxt));
      if (targets.empty()) {
        // discharged branch: a self-loop inside F makes the play winning
        a.nodes[anode].edges.push_back(anode);
        a.nodes[anode].builder_moves = true;
        a.nodes[anode].in_f = true;
      } else {
        a.nodes[anode].edges = std::move(targets);
      }
      a.nodes[id].edges.push_back(anode);
    }
  }
  a.finish_edges();
  return a;
}

bool builder_wins(const Arena& a, bool optimistic) {
  const std::size_t n = a.nodes.size();
  std::vector<char> in_f(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    const auto& node = a.nodes[v];
    in_f[v] = node.overflow ? optimistic : node.in_f;
  }
  std::vector<char> alive(n, 1);

  auto attractor = [&](bool builder, const std::vector<char>& seed) {
    std::vector<char> in(n, 0);
    std::vector<int> cnt(n, 0);
    std::deque<int> q;
    for (std::size_t v = 0; v < n; ++v) {
      if (!alive[v]) continue;
      for (int w : a.nodes[v].edges)
        if (alive[w]) ++cnt[v];
      if (seed[v]) {
        in[v] = 1;
        q.push_back(static_cast<int>(v));
      }
    }
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      for (int w : a.preds[u]) {
        if (!alive[w] || in[w]) continue;
        bool take = a.nodes[w].builder_moves == builder || --cnt[w] == 0;
        if (take) {
          in[w] = 1;
          q.push_back(w);
        }
      }
    }
    return in;
  };

  while (true) {
    std::vector<char> seed(n, 0);
    bool any = false;
    for (std::size_t v = 0; v < n; ++v)
      if (alive[v] && in_f[v]) {
        seed[v] = 1;
        any = true;
      }
    std::vector<char> reach = any ? attractor(true, seed) : std::vector<char>(n, 0);
    std::vector<char> losing(n, 0);
    bool have_losing = false;
    for (std::size_t v = 0; v < n; ++v)
      if (alive[v] && !reach[v]) {
        losing[v] = 1;
        have_losing = true;
      }
    if (!have_losing) break;
    std::vector<char> removed = attractor(false, losing);
    for (std::size_t v = 0; v < n; ++v)
      if (removed[v]) alive[v] = 0;
    if (!alive[a.start]) return false;
  }
  return alive[a.start];
}

}  // namespace

GameResult bounded_game_oracle(const Abpds& bp, const Config& c, int bound, GameMode mode) {
  Arena arena = build_arena(bp, c, bound);
  if (!arena.any_overflow) {
    bool win = builder_wins(arena, false);
    if (mode == GameMode::Optimistic && win) return GameResult::Unknown;
    if (mode == GameMode::Pessimistic && !win) return GameResult::Unknown;
    return win ? GameResult::Accept : GameResult::Reject;
  }
  if (mode != GameMode::Optimistic && builder_wins(arena, false)) return GameResult::Accept;
  if (mode != GameMode::Pessimistic && !builder_wins(arena, true)) return GameResult::Reject;
  return GameResult::Unknown;
}

namespace {

struct Explored {
  std::vector<Config> configs;
  std::map<Config, std::size_t> index;
  bool complete = true;
};

// Closure of the query under global steps and call continuations; both step
// styles of the logic stay inside this set.
Explored explore(const LabelledPds& pds, const PopSummaries& pops, const Config& c,
                 const OracleLimits& limits) {
  Explored out;
  std::deque<std::size_t> work;
  auto intern = [&](const Config& cfg) {
    auto it = out.index.find(cfg);
    if (it != out.index.end()) return;
    if (static_cast<int>(cfg.stack.size()) > limits.max_height ||
        out.configs.size() >= limits.max_nodes) {
      out.complete = false;
      return;
    }
    out.index.emplace(cfg, out.configs.size());
    work.push_back(out.configs.size());
    out.configs.push_back(cfg);
  };
  intern(c);
  while (!work.empty() && out.complete) {
    Config cfg = out.configs[work.front()];
    work.pop_front();
    for (auto& [ri, nxt] : immediate_successors(pds, cfg)) intern(nxt);
    if (cfg.stack.front() == kBottomSymbol) continue;
    for (std::size_t ri : pds.rules_at(cfg.control, cfg.stack.front())) {
      const LabelledRule& r = pds.rules()[ri];
      if (r.kind != RuleKind::Call) continue;
      for (ControlId d : pops.pops(r.to_control, r.push[0])) {
        Config cont;
        cont.control = d;
        cont.stack.assign(cfg.stack.begin() + 1, cfg.stack.end());
        cont.stack.insert(cont.stack.begin(), r.push[1]);
        intern(cont);
      }
    }
  }
  return out;
}

}  // namespace

Outcome semantic_oracle(const LabelledPds& pds, const FormulaPtr& phi, const Labelling& labels,
                        const Config& c, const OracleLimits& limits) {
  PopSummaries pops(pds);
  Explored ex = explore(pds, pops, c, limits);
  if (!ex.complete) return Outcome::Unknown;
  const std::size_t N = ex.configs.size();

  std::vector<char> ret_target(pds.control_count(), 0);
  for (const LabelledRule& r : pds.rules())
    if (r.kind == RuleKind::Ret) ret_target[r.to_control] = 1;

  // Per configuration: bare flag, global successors, and the branch
  // structure abstract operators see. A call branch carries the indices of
  // its reachable return continuations; those with no extraction point at
  // the landing control are dropped there.
  struct Branch {
    RuleKind kind;
    std::size_t succ = 0;               // Int
    std::vector<std::size_t> returns;   // Call
  };
  std::vector<char> bare(N, 0);
  std::vector<std::vector<std::size_t>> gsucc(N);
  std::vector<std::vector<Branch>> branches(N);
  for (std::size_t i = 0; i < N; ++i) {
    const Config& cfg = ex.configs[i];
    if (cfg.stack.front() == kBottomSymbol) {
      bare[i] = 1;
      continue;
    }
    for (auto& [ri, nxt] : immediate_successors(pds, cfg)) gsucc[i].push_back(ex.index.at(nxt));
    for (std::size_t ri : pds.rules_at(cfg.control, cfg.stack.front())) {
      const LabelledRule& r = pds.rules()[ri];
      Branch b;
      b.kind = r.kind;
      if (r.kind == RuleKind::Int) {
        Config nxt;
        nxt.control = r.to_control;
        nxt.stack.assign(r.push.begin(), r.push.end());
        nxt.stack.insert(nxt.stack.end(), cfg.stack.begin() + 1, cfg.stack.end());
        b.succ = ex.index.at(nxt);
      } else if (r.kind == RuleKind::Call) {
        for (ControlId d : pops.pops(r.to_control, r.push[0])) {
          if (!ret_target[d]) continue;
          Config cont;
          cont.control = d;
          cont.stack.assign(cfg.stack.begin() + 1, cfg.stack.end());
          cont.stack.insert(cont.stack.begin(), r.push[1]);
          b.returns.push_back(ex.index.at(cont));
        }
      }
      branches[i].push_back(std::move(b));
    }
  }

  auto atom_holds = [&](const std::string& name, const Config& cfg) {
    auto ita = labels.automata.find(name);
    if (ita != labels.automata.end()) return ma_accepts(ita->second, cfg);
    auto its = labels.sets.find(name);
    if (its == labels.sets.end())
      throw Error(ErrorCode::UnknownAtom, "no valuation for atom '" + name + "'");
    return std::find(its->second.begin(), its->second.end(), cfg.control) != its->second.end();
  };

  std::vector<FormulaPtr> cl = closure(phi);
  std::map<std::string, std::size_t> clidx;
  for (std::size_t k = 0; k < cl.size(); ++k) clidx[to_string(cl[k])] = k;
  std::vector<std::vector<char>> val(cl.size(), std::vector<char>(N, 0));

  for (std::size_t k = 0; k < cl.size(); ++k) {
    const FormulaPtr& f = cl[k];
    auto sub = [&](const FormulaPtr& g) -> const std::vector<char>& {
      return val[clidx.at(to_string(g))];
    };
    auto set_direct = [&](auto&& fn) {
      for (std::size_t i = 0; i < N; ++i) val[k][i] = bare[i] ? 0 : (fn(i) ? 1 : 0);
    };
    switch (f->kind()) {
      case FormulaKind::True:
        set_direct([&](std::size_t) { return true; });
        break;
      case FormulaKind::False:
        set_direct([&](std::size_t) { return false; });
        break;
      case FormulaKind::Atom:
        set_direct([&](std::size_t i) { return atom_holds(f->atom(), ex.configs[i]); });
        break;
      case FormulaKind::NegAtom:
        set_direct([&](std::size_t i) { return !atom_holds(f->atom(), ex.configs[i]); });
        break;
      case FormulaKind::And: {
        const auto &l = sub(f->left()), &r = sub(f->right());
        set_direct([&](std::size_t i) { return l[i] && r[i]; });
        break;
      }
      case FormulaKind::Or: {
        const auto &l = sub(f->left()), &r = sub(f->right());
        set_direct([&](std::size_t i) { return l[i] || r[i]; });
        break;
      }
      case FormulaKind::ExistsNext:
      case FormulaKind::ForallNext: {
        const auto& ch = sub(f->left());
        bool forall = f->kind() == FormulaKind::ForallNext;
        if (f->step() == StepKind::Global) {
          set_direct([&](std::size_t i) {
            if (forall) {
              for (std::size_t s : gsucc[i])
                if (!ch[s]) return false;
              return true;
            }
            for (std::size_t s : gsucc[i])
              if (ch[s]) return true;
            return false;
          });
        } else {
          set_direct([&](std::size_t i) {
            auto branch_val = [&](const Branch& b) {
              if (b.kind == RuleKind::Int) return static_cast<bool>(ch[b.succ]);
              if (b.kind == RuleKind::Ret) return false;
              for (std::size_t d : b.returns)
                if (ch[d]) return true;
              return false;
            };
            if (forall) {
              for (const Branch& b : branches[i])
                if (!branch_val(b)) return false;
              return true;
            }
            for (const Branch& b : branches[i])
              if (branch_val(b)) return true;
            return false;
          });
        }
        break;
      }
      case FormulaKind::ExistsUntil:
      case FormulaKind::ForallUntil:
      case FormulaKind::ExistsRelease:
      case FormulaKind::ForallRelease: {
        const auto& f1 = sub(f->left());
        const auto& f2 = sub(f->right());
        const bool until =
            f->kind() == FormulaKind::ExistsUntil || f->kind() == FormulaKind::ForallUntil;
        const bool forall =
            f->kind() == FormulaKind::ForallUntil || f->kind() == FormulaKind::ForallRelease;
        // Until is a least fixpoint, Release a greatest one.
        for (std::size_t i = 0; i < N; ++i) val[k][i] = (!until && !bare[i]) ? 1 : 0;
        bool changed = true;
        while (changed) {
          changed = false;
          for (std::size_t i = 0; i < N; ++i) {
            if (bare[i]) continue;
            // the obligation carried into every continued branch
            char carry = until ? f1[i] : f2[i];
            auto rec_val = [&](std::size_t j) { return val[k][j]; };
            auto branch_val = [&](const Branch& b, std::size_t gs, bool use_global) -> bool {
              if (use_global) return carry && rec_val(gs);
              if (b.kind == RuleKind::Int) return carry && rec_val(b.succ);
              if (b.kind == RuleKind::Ret) return false;
              if (!carry) return false;
              for (std::size_t d : b.returns)
                if (rec_val(d)) return true;
              return false;
            };
            bool cont;
            if (f->step() == StepKind::Global) {
              if (forall) {
                cont = true;
                for (std::size_t s : gsucc[i]) cont = cont && branch_val({}, s, true);
              } else {
                cont = false;
                for (std::size_t s : gsucc[i]) cont = cont || branch_val({}, s, true);
              }
            } else {
              if (forall) {
                cont = true;
                for (const Branch& b : branches[i]) cont = cont && branch_val(b, 0, false);
              } else {
                cont = false;
                for (const Branch& b : branches[i]) cont = cont || branch_val(b, 0, false);
              }
            }
            char now = until ? f2[i] : static_cast<char>(f2[i] && f1[i]);
            char next = (now || cont) ? 1 : 0;
            if (next != val[k][i]) {
              val[k][i] = next;
              changed = true;
            }
          }
        }
        break;
      }
    }
  }
  return val[clidx.at(to_string(phi))][ex.index.at(c)] ? Outcome::Sat : Outcome::Unsat;
}

BuiltProduct build_product(const LabelledPds& pds, const FormulaPtr& phi, const Labelling& labels,
                           bool force_regular) {
  if (!force_regular && !labels.has_regular()) return build_standard(pds, phi, labels.sets);
  std::map<std::string, MultiAutomaton> vals;
  auto add_atoms = [&](const std::vector<std::string>& names) {
    for (const std::string& name : names) {
      if (vals.count(name)) continue;
      auto ita = labels.automata.find(name);
      if (ita != labels.automata.end()) {
        vals.emplace(name, ita->second);
        continue;
      }
      auto its = labels.sets.find(name);
      if (its != labels.sets.end())
        vals.emplace(name,
                     ma_from_control_set(pds.control_count(), pds.alphabet_size(), its->second));
    }
  };
  add_atoms(positive_atoms(phi));
  add_atoms(negated_atoms(phi));
  return build_regular(pds, phi, vals);
}

Verdict model_check(const LabelledPds& pds, const FormulaPtr& phi, const Labelling& labels,
                    const Config& c, const EngineOptions& opts, bool force_regular) {
  BuiltProduct prod = build_product(pds, phi, labels, force_regular);
  return member(prod.bp, prod.map_config(c), opts);
}

}  // namespace bcaret
