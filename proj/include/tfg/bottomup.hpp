#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tfg/control.hpp"
#include "tfg/magic.hpp"
#include "tfg/topdown.hpp"

namespace tfg {

/// A derived fact with the goals that were still delayed when it was derived.
/// Fact and delayed goals live in one graph so their sharing is kept.
struct Edge {
  std::size_t id = 0;
  Graph graph;
  Atom fact;
  std::vector<Atom> delayed;
};

/// `fact` or `fact | goal, goal`.
std::string to_string(const Signature& sig, const Edge& e);

/// Edge A prunes edge B when A's fact subsumes B's and either A has no
/// delayed goals, or A's fact and delayed goals together subsume B's and
/// both delay the same relations in the same order.
bool prunes(const Signature& sig, const Edge& a, const Edge& b);

class Table {
public:
  std::size_t add(Edge e);
  const Edge& edge(std::size_t id) const { return edges_.at(id); }
  bool alive(std::size_t id) const { return alive_.at(id); }
  bool processed(std::size_t id) const { return processed_.at(id); }
  void evict(std::size_t id) { alive_.at(id) = false; }
  void mark_processed(std::size_t id) { processed_.at(id) = true; }

  /// Every edge ever stored, including evicted ones.
  std::size_t stored() const noexcept { return edges_.size(); }
  std::size_t size() const noexcept { return live_; }
  std::vector<std::size_t> live() const;
  const std::vector<std::size_t>& with_relation(const std::string& relation) const;

private:
  std::vector<Edge> edges_;
  std::vector<bool> alive_, processed_;
  std::map<std::string, std::vector<std::size_t>> by_relation_;
  std::size_t live_ = 0;
};

enum class AgendaOrder { fifo, lifo };
AgendaOrder parse_agenda_order(std::string_view text);

class Agenda {
public:
  explicit Agenda(AgendaOrder order = AgendaOrder::fifo) : order_(order) {}
  void push(std::size_t id) { q_.push_back(id); }
  std::size_t pop();
  bool empty() const noexcept { return q_.empty(); }
  std::size_t size() const noexcept { return q_.size(); }

private:
  AgendaOrder order_;
  std::deque<std::size_t> q_;
};

struct BottomUpOptions {
  AgendaOrder agenda = AgendaOrder::fifo;
  std::size_t max_edges = 100000;
  std::uint64_t max_steps = 1000000;
  TopDownOptions topdown;
  /// Feature path locating the phonology on fact arguments; empty disables the filter.
  std::vector<std::string> phon_path{"phon"};
  /// All-pairs subsumption check of the table after every store.
  bool check_table = false;
  /// Receives one tab-separated line per engine event.
  std::function<void(const std::string&)> trace;
};

struct BottomUpStats {
  std::uint64_t pops = 0;
  std::uint64_t matches = 0;       // match invocations
  std::uint64_t reductions = 0;    // clause instances whose tabled literals all unified
  std::uint64_t derived = 0;       // edges produced by match or initialization
  std::uint64_t stored = 0;
  std::uint64_t pruned = 0;
  std::uint64_t evicted = 0;
  std::uint64_t excluded = 0;      // facts rejected by the phonology filter
  std::uint64_t repeated_reductions = 0;  // (clause, premise multiset) seen before
  std::uint64_t table_violations = 0;     // subsumed pairs found by check_table
  TopDownStats topdown;
};

struct ParseResult {
  /// Goal instances from table edges without delayed goals, most general only.
  std::vector<Literal> answers;
  /// Table edges unifying with the goal that still carry delayed goals.
  std::vector<Edge> floundered;
  BottomUpStats stats;
};

std::vector<std::string> answer_strings(const Signature& sig, const ParseResult& r);

/// Semi-naive evaluation of a magic grammar, using the top-down interpreter
/// for every literal that is not tabled.
class BottomUpEngine {
public:
  BottomUpEngine(const MagicGrammar& mg, Control control, BottomUpOptions opts = {});

  /// initialize + run_fixpoint + answer extraction.
  ParseResult parse(const Literal& goal, const std::vector<std::string>& phon);

  /// Seeds the agenda with the goal's magic fact and the initial facts that
  /// pass the phonology filter.
  void initialize(const Literal& goal, const std::vector<std::string>& phon);
  void run_fixpoint();
  /// New edges combining `edge` with processed table edges.
  std::vector<Edge> match(const Edge& edge);
  /// Adds non-pruned edges to table and agenda; returns the ids stored.
  std::vector<std::size_t> store(std::vector<Edge> edges);
  ParseResult collect(const Literal& goal) const;

  const Table& table() const noexcept { return table_; }
  const Agenda& agenda() const noexcept { return agenda_; }
  const BottomUpStats& stats() const noexcept { return stats_; }
  TopDownEngine& topdown() noexcept { return td_; }

  /// Whether `words` is a contiguous run in `input`.
  static bool contiguous(const std::vector<std::string>& words, const std::vector<std::string>& input);

private:
  struct Premise {
    std::size_t edge;
    NodeId base;
  };

  void emit(const std::string& event, const std::string& detail) const;
  bool admitted(const Edge& e, const std::vector<std::string>& phon) const;
  void collect_edges(Store& store, std::size_t clause, NodeId base, std::size_t pos, std::size_t trigger,
                     const Edge& new_edge, std::vector<std::size_t>& premises, std::vector<Atom>& delayed,
                     std::vector<Edge>& out);
  void finish(Store& store, std::size_t clause, NodeId base, const std::vector<std::size_t>& premises,
              const std::vector<Atom>& delayed, std::vector<Edge>& out);
  void check_table();

  const MagicGrammar* mg_;
  const Signature* sig_;
  BottomUpOptions opts_;
  TopDownEngine td_;
  Table table_;
  Agenda agenda_;
  BottomUpStats stats_;
  std::set<std::pair<std::size_t, std::vector<std::size_t>>> reduced_;
  std::vector<FeatId> phon_;
  bool phon_enabled_ = false;
};

/// Answers a goal by top-down resolution alone over the source grammar.
ParseResult solve_topdown(const Grammar& g, const Control& control, const Literal& goal, TopDownOptions opts = {});

}  // namespace tfg
