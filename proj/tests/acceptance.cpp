// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "tfg/bottomup.hpp"

using tfg::MagicMode;

namespace {

using Clock = std::chrono::steady_clock;

struct Check {
  bool ok = true;
  std::ostringstream why;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) why << what;
    ok = ok && cond;
  }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Loaded {
  std::shared_ptr<const tfg::Signature> sig;
  tfg::Grammar g;
  tfg::Control ctl;
  tfg::ParseTypeSpec spec;

  Loaded(const std::string& s, const std::string& gname, const std::string& cname)
      : sig(fixture::signature(s)),
        g(fixture::grammar(sig, gname)),
        ctl(fixture::control(*sig, cname)),
        spec(*sig, ctl.parse_types) {}

  tfg::ParseResult parse(const std::string& sentence, MagicMode mode, tfg::BottomUpOptions o = {}) const {
    auto mg = tfg::transform_grammar(g, spec, mode);
    tfg::BottomUpEngine e(mg, ctl, std::move(o));
    return e.parse(fixture::sentence(*sig, sentence), fixture::words(sentence));
  }
  tfg::ParseResult topdown(const std::string& sentence, tfg::TopDownOptions o = {}) const {
    return tfg::solve_topdown(g, ctl, fixture::sentence(*sig, sentence), o);
  }
};

std::set<std::string> answers(const tfg::Signature& sig, const tfg::ParseResult& r) {
  auto v = tfg::answer_strings(sig, r);
  return {v.begin(), v.end()};
}

std::string canon_clause(const tfg::Signature& sig, const std::shared_ptr<const tfg::Signature>& p, const char* text) {
  return to_string(sig, tfg::parse_grammar(text, p).clause(0));
}

const char* kMarySleeps = "constituent(sign & cat:s & phon:<mary, sleeps> & sem:(sleep & subj:mary_lf))";

// 1. Magic variant and magic rules of the sentence rule.
void transformation(Check& c) {
  auto t0 = Clock::now();
  auto sig = fixture::signature();
  auto g = fixture::grammar(sig);
  tfg::ParseTypeSpec spec(*sig, {"sign"});
  const std::string variant = canon_clause(*sig, sig,
                                           "constituent(#M & sign & cat:s & phon:#1 & sem:#5) :="
                                           "  magic_constituent(#M),"
                                           "  constituent(sign & cat:np & phon:#2 & agr:#4 & sem:#6),"
                                           "  constituent(sign & cat:v & phon:#3 & agr:#4 & sem:(#5 & subj:#6)),"
                                           "  append(#2, #3, #1).");
  const std::string rule1 = canon_clause(*sig, sig,
                                         "magic_constituent(sign & cat:np & sem:#6) :="
                                         "  magic_constituent(sign & cat:s & sem:(sleep & subj:#6)).");
  const std::string rule2 = canon_clause(*sig, sig,
                                         "magic_constituent(sign & cat:v & phon:list & agr:#4 & sem:(#5 & subj:#6)) :="
                                         "  magic_constituent(sign & cat:s & phon:list & sem:#5),"
                                         "  constituent(sign & cat:np & phon:list & agr:#4 & sem:#6).");
  const std::string rule3 = canon_clause(*sig, sig,
                                         "magic_append(#2, #3, #1) :="
                                         "  magic_constituent(sign & cat:s & phon:#1 & sem:#5),"
                                         "  constituent(sign & cat:np & phon:#2 & agr:#4 & sem:#6),"
                                         "  constituent(sign & cat:v & phon:#3 & agr:#4 & sem:(#5 & subj:#6)).");

  auto sel = tfg::transform_grammar(g, spec, MagicMode::selective);
  std::vector<std::string> from_clause1, magic_rules;
  for (const auto& cc : sel.clauses)
    if (cc.source == 0) from_clause1.push_back(to_string(*sig, cc.clause));
  c.require(from_clause1 == std::vector<std::string>{variant, rule1, rule2}, "selective clauses differ from golden");

  auto full = tfg::transform_grammar(g, spec, MagicMode::full);
  std::vector<std::string> full1;
  for (const auto& cc : full.clauses)
    if (cc.source == 0) full1.push_back(to_string(*sig, cc.clause));
  c.require(full1 == std::vector<std::string>{variant, rule1, rule2, rule3}, "full clauses differ from golden");
  c.require(seconds_since(t0) < 1.0, "slower than 1 s");
}

// 2. Seed for "mary sleeps".
void seed(Check& c) {
  auto sig = fixture::signature();
  auto g = fixture::grammar(sig);
  auto mg = tfg::transform_grammar(g, tfg::ParseTypeSpec(*sig, {"sign"}), MagicMode::selective);
  auto s = tfg::make_seed(fixture::sentence(*sig, "mary sleeps"), mg);
  auto expected = tfg::parse_literal("magic_constituent(sign & cat:s & phon:<mary, sleeps> & sem:sem)", *sig);
  c.require(s.atom.relation == "magic_constituent", "seed relation");
  c.require(to_string(*sig, s) == to_string(*sig, expected), "seed differs: " + to_string(*sig, s));
  // structural, not just printed: the seed has a sem arc of type sem
  auto sem = tfg::follow(s.graph, s.atom.args[0], std::vector<tfg::FeatId>{sig->feature("sem")});
  c.require(sem && s.graph.type(*sem) == sig->type("sem"), "seed sem arc");
}

// 3. "mary sleeps" and "sleeps mary" on the fixture against the naive fixpoint.
void end_to_end(Check& c) {
  Loaded f("toy.sig", "toy.tfg", "toy.ctl");
  for (const char* sentence : {"mary sleeps", "sleeps mary"}) {
    auto t0 = Clock::now();
    auto r = f.parse(sentence, MagicMode::selective);
    c.require(seconds_since(t0) < 1.0, std::string("slower than 1 s on ") + sentence);
    auto oracle = oracle::naive_answers(f.g, fixture::sentence(*f.sig, sentence), 24, 6);
    c.require(answers(*f.sig, r) == oracle, std::string("differs from naive fixpoint on ") + sentence);
  }
  auto r = f.parse("mary sleeps", MagicMode::selective);
  c.require(answers(*f.sig, r) == std::set<std::string>{kMarySleeps}, "mary sleeps answer");
  if (r.answers.size() == 1) {
    const auto& a = r.answers[0];
    auto sem = tfg::follow(a.graph, a.atom.args[0], std::vector<tfg::FeatId>{f.sig->feature("sem")});
    auto subj = tfg::follow(a.graph, a.atom.args[0], std::vector<tfg::FeatId>{f.sig->feature("sem"), f.sig->feature("subj")});
    auto phon = tfg::follow(a.graph, a.atom.args[0], std::vector<tfg::FeatId>{f.sig->feature("phon")});
    c.require(sem && a.graph.type(*sem) == f.sig->type("sleep"), "sem is not sleep");
    c.require(subj && a.graph.type(*subj) == f.sig->type("mary_lf"), "subj is not mary_lf");
    c.require(phon && tfg::fs_to_words(*f.sig, a.graph, *phon) == std::vector<std::string>{"mary", "sleeps"}, "phon");
  }
  c.require(f.parse("sleeps mary", MagicMode::selective).answers.empty(), "sleeps mary has answers");
}

struct Fixture {
  std::string sig, grammar, control;
  std::vector<std::string> sentences;
};

const std::vector<Fixture>& fixtures() {
  static const std::vector<Fixture> all{
      {"toy.sig", "toy.tfg", "toy.ctl", {"mary sleeps", "sleeps mary", "mary", ""}},
      {"english.sig", "transitive.tfg", "english.ctl", {"john sees mary", "mary sleeps", "sees john mary"}},
      {"english.sig", "ambiguous.tfg", "english.ctl", {"bank sleeps", "mary sleeps", "bank"}},
      {"english.sig", "lexicon.tfg", "english.ctl", {"mary sleeps", "john sleeps", "sleeps john"}},  // member/2
      {"english.sig", "closure.tfg", "english.ctl", {"mary sleeps"}},
      {"delay.sig", "delay.tfg", "delay.ctl", {"mary sleeps", "sleeps mary"}},  // append delayed across edges
      {"john.sig", "john.tfg", "toy.ctl", {"mary sleeps", "john sleeps"}},
  };
  return all;
}

// 4. Selective, full and top-down agree.
void strategies(Check& c) {
  auto t0 = Clock::now();
  for (const auto& f : fixtures()) {
    Loaded l(f.sig, f.grammar, f.control);
    for (const auto& s : f.sentences) {
      auto sel = answers(*l.sig, l.parse(s, MagicMode::selective));
      auto full = answers(*l.sig, l.parse(s, MagicMode::full));
      auto td = answers(*l.sig, l.topdown(s));
      c.require(sel == full && full == td, f.grammar + " disagrees on '" + s + "'");
    }
  }
  c.require(fixtures().size() >= 5, "fewer than 5 fixtures");
  c.require(seconds_since(t0) < 10.0, "slower than 10 s");
}

// 5. Random unification properties on the lattice signature.
void lattice(Check& c) {
  auto sig = fixture::signature("lattice.sig");
  std::mt19937 rng(1014);
  int successes = 0, violations = 0;
  for (int i = 0; i < 1000; ++i) {
    auto a = oracle::random_structure(*sig, rng, 12), b = oracle::random_structure(*sig, rng, 12);
    auto ab = tfg::unify(*sig, a, b), ba = tfg::unify(*sig, b, a);
    auto o = oracle::unify(*sig, a, b);
    bool ok = ab.ok() == ba.ok() && ab.ok() == o.has_value();
    if (ok && ab.ok()) {
      ++successes;
      ok = tfg::isomorphic(*sig, *ab.result, *ba.result) && tfg::isomorphic(*sig, *ab.result, *o) &&
           !tfg::check_well_typed(*sig, ab.result->graph) && tfg::subsumes(*sig, a, *ab.result) &&
           tfg::subsumes(*sig, b, *ab.result) && oracle::subsumes(*sig, a, *ab.result) &&
           oracle::subsumes(*sig, b, *ab.result);
    }
    // a subsumes b exactly when unifying them gives b back
    bool sub = tfg::subsumes(*sig, a, b);
    ok = ok && sub == oracle::subsumes(*sig, a, b) && sub == (ab.ok() && tfg::isomorphic(*sig, *ab.result, b));
    if (!ok) ++violations;
  }
  if (violations) c.require(false, std::to_string(violations) + " violations");
  c.require(successes > 50, "too few unifiable pairs to be meaningful: " + std::to_string(successes));
}

// 6. No repeated reductions; table subsumption-free after every store.
void semi_naive(Check& c) {
  std::vector<Fixture> all = fixtures();
  all.push_back({"toy.sig", "flounder.tfg", "delay.ctl", {"mary sleeps"}});
  tfg::BottomUpOptions o;
  o.check_table = true;
  for (const auto& f : all) {
    Loaded l(f.sig, f.grammar, f.control);
    for (const auto& s : f.sentences)
      for (auto mode : {MagicMode::selective, MagicMode::full}) {
        if (mode == MagicMode::full && f.grammar == "flounder.tfg") continue;  // does not terminate in full mode
        auto r = l.parse(s, mode, o);
        c.require(r.stats.repeated_reductions == 0, f.grammar + ": repeated reduction on '" + s + "'");
        c.require(r.stats.table_violations == 0, f.grammar + ": subsumed pair in table on '" + s + "'");
      }
  }
}

// 7. An irrelevant lexical entry changes nothing.
void goal_directed(Check& c) {
  Loaded base("john.sig", "toy.tfg", "toy.ctl");
  Loaded extended("john.sig", "john.tfg", "toy.ctl");
  std::vector<std::string> trace;
  tfg::BottomUpOptions o;
  o.trace = [&](const std::string& line) { trace.push_back(line); };
  auto a = base.parse("mary sleeps", MagicMode::selective);
  auto b = extended.parse("mary sleeps", MagicMode::selective, o);
  c.require(answers(*base.sig, a) == answers(*extended.sig, b), "answers differ");
  c.require(a.stats.stored == b.stats.stored, "stored edges differ");
  bool excluded = false;
  for (const auto& line : trace)
    if (line.rfind("EXCLUDE\t", 0) == 0 && line.find("phon:<john>") != std::string::npos) excluded = true;
  c.require(excluded, "no EXCLUDE event for the john entry");
}

// 8. Deterministic closure.
void closure(Check& c) {
  Loaded l("english.sig", "closure.tfg", "english.ctl");
  tfg::BottomUpOptions on, off;
  off.topdown.deterministic_closure = false;
  auto a = l.parse("mary sleeps", MagicMode::selective, on);
  auto b = l.parse("mary sleeps", MagicMode::selective, off);
  c.require(answers(*l.sig, a) == answers(*l.sig, b), "answers differ");
  c.require(!a.answers.empty(), "no answer");
  c.require(a.stats.topdown.choice_points < b.stats.topdown.choice_points,
            "choice points " + std::to_string(a.stats.topdown.choice_points) + " vs " +
                std::to_string(b.stats.topdown.choice_points));
}

// 9. Delayed append crossing an edge; undischargeable residue.
void delayed(Check& c) {
  Loaded l("delay.sig", "delay.tfg", "delay.ctl");
  auto mg = tfg::transform_grammar(l.g, l.spec, MagicMode::selective);
  tfg::BottomUpEngine e(mg, l.ctl);
  auto r = e.parse(fixture::sentence(*l.sig, "mary sleeps"), fixture::words("mary sleeps"));
  c.require(answers(*l.sig, r) == std::set<std::string>{kMarySleeps}, "wrong answer");
  c.require(r.floundered.empty(), "residue left");
  bool carried = false;
  for (std::size_t id : e.table().live()) {
    const auto& x = e.table().edge(id);
    if (x.fact.relation == "constituent" && !x.delayed.empty()) carried = true;
  }
  c.require(carried, "no edge carried a delayed goal");

  Loaded f("toy.sig", "flounder.tfg", "delay.ctl");
  auto fr = f.parse("mary sleeps", MagicMode::selective);
  c.require(fr.answers.empty(), "floundering variant has answers");
  c.require(fr.floundered.size() == 1, "floundered edges: " + std::to_string(fr.floundered.size()));
  if (fr.floundered.size() == 1)
    c.require(to_string(*f.sig, fr.floundered[0]) == std::string(kMarySleeps) + " | append(top, <sleeps>, top)",
              "floundered edge: " + to_string(*f.sig, fr.floundered[0]));
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
      {"transformation golden", transformation},
      {"seed golden", seed},
      {"end-to-end parse", end_to_end},
      {"strategy equivalence", strategies},
      {"lattice/unification properties", lattice},
      {"semi-naive discipline", semi_naive},
      {"goal-directedness", goal_directed},
      {"deterministic closure", closure},
      {"delayed-goal pass-through", delayed},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    auto t0 = Clock::now();
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.require(false, std::string("exception: ") + e.what());
    }
    std::cout << (c.ok ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << " ("
              << static_cast<long>(seconds_since(t0) * 1000) << " ms)";
    if (!c.ok) std::cout << ": " << c.why.str();
    std::cout << std::endl;
    failed += !c.ok;
  }
  return failed ? 1 : 0;
}
