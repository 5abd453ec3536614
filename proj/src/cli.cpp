#include "ccm/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "ccm/annotate.hpp"
#include "ccm/ghost.hpp"
#include "ccm/tso.hpp"

namespace ccm::cli {

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

struct Input {
  dsl::Document doc;
  std::string digest;
};

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Parse errors are reported as ValidationError with the path in front.
Input read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LookupError("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    return {dsl::parse(text), hex64(fnv1a64(text))};
  } catch (const dsl::ParseError& e) {
    throw ValidationError(path + ":" + e.what());
  }
}

Limits limits_of(const CommonOptions& o) {
  Limits l;
  l.max_ops = o.max_ops;
  l.max_states = o.max_states;
  return l;
}

std::string common_flags(const CommonOptions& o) {
  std::string s;
  for (const auto& i : o.init) s += " --init " + i;
  if (o.max_ops != Limits{}.max_ops) s += " --max-ops " + std::to_string(o.max_ops);
  if (o.max_states != Limits{}.max_states) {
    s += " --max-states " + std::to_string(o.max_states);
  }
  if (o.json) s += " --json";
  return s;
}

Json witness_json(const Witness& w) {
  return Json{{"condition", w.condition},
              {"ops", w.ops},
              {"states", w.rendered},
              {"detail", w.detail}};
}

std::string witness_text(const Witness& w) {
  std::string s = "  [" + w.condition + "]";
  for (const auto& o : w.ops) s += " " + o;
  s += ": " + w.detail;
  for (const auto& r : w.rendered) s += "\n      {" + r + "}";
  return s;
}

Json state_list(const std::set<State>& states, const VarTable& vars) {
  Json out = Json::array();
  for (const auto& s : states) out.push_back(vars.render(s));
  return out;
}

std::vector<std::string> covering_edges(const Order& order, const Program& p) {
  std::vector<std::string> out;
  for (auto [a, b] : order.edges()) {
    bool covering = true;
    for (int c : members(order.successors(a))) {
      covering = covering && !order.precedes(c, b);
    }
    if (covering) out.push_back(p.op(a).id + "<" + p.op(b).id);
  }
  return out;
}

std::vector<std::string> listing(const Order& order, const Program& p) {
  std::vector<std::string> out;
  for (int o : order.topological()) out.push_back(p.op(o).id);
  return out;
}

std::string joined(const std::vector<std::string>& parts, const std::string& sep) {
  std::string s;
  for (const auto& p : parts) s += (s.empty() ? "" : sep) + p;
  return s;
}

// A report under construction; emitted as one JSON line or as text.
struct Report {
  Json j;
  std::vector<std::string> text;

  Report(const std::string& command, const std::string& path, const std::string& digest) {
    j["command"] = command;
    j["input"] = Json{{"path", path}, {"fnv1a64", digest}};
    j["verdict"] = "ok";
    j["witnesses"] = Json::array();
    j["behaviors"] = Json::array();
    j["stats"] = Json::object();
    text.push_back(command);
  }

  void emit(std::ostream& out, bool json, Clock::time_point start) {
    if (json) {
      j["wall_time_ms"] =
          std::chrono::duration<double, std::milli>(Clock::now() - start).count();
      out << j.dump() << "\n";
    } else {
      for (const auto& l : text) out << l << "\n";
    }
  }
};

int run_guarded(const CommonOptions& o, const std::string& command, std::ostream& out,
                std::ostream& err, const std::function<int(Report&)>& body) {
  const auto start = Clock::now();
  Report report(command, o.file, "");
  int code = kOk;
  try {
    code = body(report);
  } catch (const CapExceeded& e) {
    report.j["verdict"] = "cap";
    report.j["error"] = e.what();
    err << "cap exceeded: " << e.what() << "\n";
    code = kCap;
  } catch (const Error& e) {
    report.j["verdict"] = "invalid";
    report.j["error"] = e.what();
    err << "error: " << e.what() << "\n";
    code = kInvalid;
  }
  if (code == kUsage) return code;
  if (code == kInvalid || code == kCap) {
    if (o.json) report.emit(out, true, start);
    return code;
  }
  report.emit(out, o.json, start);
  return code;
}

tso::Mode mode_of(const std::string& model) {
  if (model == "tso-plain") return tso::Mode::kPlain;
  if (model == "tso-disciplined") return tso::Mode::kDisciplined;
  throw ValidationError("unknown TSO model '" + model + "'");
}

void add_report(Report& r, const CheckReport& c) {
  for (const auto& w : c.witnesses) {
    r.j["witnesses"].push_back(witness_json(w));
    r.text.push_back(witness_text(w));
  }
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

State apply_overrides(const VarTable& vars, State s,
                      const std::vector<std::string>& overrides) {
  for (const auto& item : overrides) {
    std::stringstream parts(item);
    std::string assignment;
    while (std::getline(parts, assignment, ',')) {
      const auto eq = assignment.find('=');
      if (eq == std::string::npos) {
        throw ValidationError("init override '" + assignment + "' is not name=value");
      }
      const std::string name = assignment.substr(0, eq);
      const std::string value = assignment.substr(eq + 1);
      const auto v = vars.find(name);
      if (!v) throw ValidationError("init override names unknown variable '" + name + "'");
      const auto& decl = vars[static_cast<std::size_t>(*v)];
      int parsed = -1;
      if (value == "true" || value == "T") {
        parsed = decl.domain.boolean ? 1 : -1;
      } else if (value == "false" || value == "F") {
        parsed = decl.domain.boolean ? 0 : -1;
      } else if (!decl.domain.boolean && !value.empty() &&
                 value.find_first_not_of("0123456789") == std::string::npos &&
                 value.size() < 4) {
        parsed = std::stoi(value);
      }
      if (parsed < 0 || !decl.domain.contains(parsed)) {
        throw ValidationError("init override '" + assignment + "' is outside the domain of '" +
                              name + "'");
      }
      s.set(static_cast<std::size_t>(*v), parsed);
    }
  }
  return s;
}

std::string strip_wall_time(const std::string& json_lines) {
  std::stringstream in(json_lines);
  std::string line;
  std::string out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Json j = Json::parse(line);
    j.erase("wall_time_ms");
    out += j.dump() + "\n";
  }
  return out;
}

int cmd_enumerate(const EnumerateOptions& o, std::ostream& out, std::ostream& err) {
  std::string command = "enumerate " + o.file + " --model " + o.model;
  if (o.complete_only) command += " --complete-only";
  command += common_flags(o);
  return run_guarded(o, command, out, err, [&](Report& r) {
    const Input in = read_input(o.file);
    r.j["input"]["fnv1a64"] = in.digest;
    const Program& p = in.doc.program;
    const VarTable& vars = p.vars();
    const State init = apply_overrides(vars, vars.initial_state(), o.init);
    r.j["model"] = o.model;
    r.j["init"] = vars.render(init);
    r.text.push_back("init: " + vars.render(init));

    if (o.model == "cc" || o.model == "cc-oracle" || o.model == "sc") {
      const Limits limits = limits_of(o);
      EnumerationResult res;
      if (o.model == "cc") {
        res = enumerate_cc(p, init, o.complete_only, limits);
      } else if (o.model == "sc") {
        res = enumerate_sc(p, init, o.complete_only, limits);
      } else {
        if (p.size() > limits.max_ops) {
          throw CapExceeded(std::to_string(p.size()) + " operations, cap is " +
                            std::to_string(limits.max_ops));
        }
        res = enumerate_cc_oracle(p, init, o.complete_only);
      }
      Json execs = Json::array();
      r.text.push_back("executions: " + std::to_string(res.executions.size()));
      std::size_t n = 0;
      for (const auto& e : res.executions) {
        const auto edges = covering_edges(e.order, p);
        const auto order = listing(e.order, p);
        execs.push_back(Json{{"variant", e.variant},
                             {"listing", order},
                             {"edges", edges},
                             {"final", vars.render(e.final_state)}});
        r.text.push_back("  #" + std::to_string(++n) + " " + joined(order, " ") +
                         "  edges: " + (edges.empty() ? "(none)" : joined(edges, " ")) +
                         "  final: {" + vars.render(e.final_state) + "}");
      }
      const auto behav = behaviors(res);
      r.j["behaviors"] = state_list(behav, vars);
      r.j["stats"] = Json{{"executions", res.executions.size()},
                          {"variants", res.stats.variants},
                          {"explored", res.stats.explored},
                          {"pruned_guard", res.stats.pruned_guard},
                          {"pruned_coherence", res.stats.pruned_coherence},
                          {"duplicates", res.stats.duplicates}};
      r.j["executions"] = std::move(execs);
      std::string b;
      for (const auto& s : behav) b += (b.empty() ? "{" : ", {") + vars.render(s) + "}";
      r.text.push_back("behaviors: " + (b.empty() ? "(none)" : b));
      return kOk;
    }

    const tso::Mode mode = mode_of(o.model);
    const auto classes = tso::classify_variables(p, in.doc.declared_classes);
    const CheckReport shapes = tso::check_shapes(p, classes);
    if (!shapes.pass) {
      add_report(r, shapes);
      throw ValidationError("program is outside the TSO fragment: " +
                            shapes.witnesses.front().detail);
    }
    const auto traces =
        tso::explore(p, init, classes, mode, tso::TsoLimits{o.max_states});
    Json list = Json::array();
    std::set<State> behav;
    std::size_t complete = 0;
    std::size_t n = 0;
    for (const auto& t : traces) {
      if (t.complete) {
        ++complete;
        behav.insert(t.final_config.memory);
      }
      if (o.complete_only && !t.complete) continue;
      std::vector<std::string> actions;
      for (const auto& a : t.actions) {
        const std::string who =
            a.thread >= 0 ? p.threads()[static_cast<std::size_t>(a.thread)] + ": " : "";
        actions.push_back(who + tso::describe(a, p));
      }
      list.push_back(Json{{"actions", actions},
                          {"complete", t.complete},
                          {"final", vars.render(t.final_config.memory)}});
      r.text.push_back("  #" + std::to_string(++n) + (t.complete ? "" : " (stuck)") + " " +
                       joined(actions, "; ") + "  final: {" +
                       vars.render(t.final_config.memory) + "}");
    }
    r.text.insert(r.text.begin() + 2, "traces: " + std::to_string(n));
    Json cls = Json::object();
    for (std::size_t v = 0; v < vars.size(); ++v) {
      cls[vars[v].name] =
          classes[v].shared ? "shared"
                            : "owned by " + p.threads()[static_cast<std::size_t>(classes[v].owner)];
    }
    r.j["classes"] = std::move(cls);
    r.j["behaviors"] = state_list(behav, vars);
    r.j["stats"] = Json{{"traces", traces.size()}, {"complete", complete}};
    r.j["traces"] = std::move(list);
    std::string b;
    for (const auto& s : behav) b += (b.empty() ? "{" : ", {") + vars.render(s) + "}";
    r.text.push_back("behaviors: " + (b.empty() ? "(none)" : b));
    return kOk;
  });
}

int cmd_check(const CheckOptions& o, std::ostream& out, std::ostream& err) {
  const int selected = int{o.annotation} + int{o.ghost} + int{o.soundness} + int{o.bridge};
  if (selected != 1) {
    err << "usage: check needs exactly one of --annotation, --ghost, --soundness, --bridge\n";
    return kUsage;
  }
  const std::string what = o.annotation ? "annotation"
                           : o.ghost    ? "ghost"
                           : o.soundness ? "soundness"
                                         : "bridge";
  std::string command = "check " + o.file + " --" + what;
  if (o.bridge) command += " --model " + o.model;
  command += common_flags(o);

  return run_guarded(o, command, out, err, [&](Report& r) {
    const Input in = read_input(o.file);
    r.j["input"]["fnv1a64"] = in.digest;
    const dsl::Document& doc = in.doc;
    const Program& p = doc.program;
    const VarTable& vars = p.vars();
    r.j["check"] = what;
    auto missing = [&](const std::string& section) {
      err << "usage: " << o.file << " has no " << section << " section\n";
      return kUsage;
    };
    auto finish = [&](const CheckReport& report) {
      add_report(r, report);
      r.j["verdict"] = report.pass ? "pass" : "fail";
      r.text.insert(r.text.begin() + 1, std::string("verdict: ") +
                                            (report.pass ? "pass" : "fail"));
      return report.pass ? kOk : kFailed;
    };

    if (o.annotation || o.soundness) {
      if (!doc.has_annotation) return missing("annotation");
      const CheckReport local = check_local(doc.annotation, p);
      const CheckReport nonint = check_noninterference(doc.annotation, p);
      Json pre = Json::object();
      for (const auto& op : p.ops()) {
        const int i = p.index_of(op.id);
        const Predicate d = derived_pre(doc.annotation, p, i);
        const StateSet ext = d.extension(StateSpace(vars));
        pre[op.id] = to_string(Predicate(ext), vars);
      }
      r.j["preconditions"] = std::move(pre);
      r.j["stats"] = Json{{"local", local.pass}, {"noninterference", nonint.pass}};
      CheckReport report;
      report.merge(local);
      report.merge(nonint);
      if (o.annotation || !report.pass) return finish(report);

      std::vector<State> inits;
      if (o.init.empty()) {
        StateSpace(vars).for_each([&](const State& s) { inits.push_back(s); });
      } else {
        inits.push_back(apply_overrides(vars, vars.initial_state(), o.init));
      }
      for (const auto& s : inits) {
        report.merge(check_soundness_conclusion(doc.annotation, p, s, limits_of(o)));
      }
      r.j["stats"]["initial_states"] = inits.size();
      return finish(report);
    }

    if (o.ghost) {
      bool ghostly = doc.has_ghost();
      for (const auto& op : p.ops()) ghostly = ghostly || !op.ghost_targets.empty();
      if (!ghostly) return missing("ghost or augment");
      const Augmentation aug = Augmentation::from_program(p);
      const State init = apply_overrides(vars, vars.initial_state(), o.init);
      CheckReport report;
      const CheckReport projection = check_projection(aug);
      report.merge(projection);
      Json stats{{"projection", projection.pass}};
      if (projection.pass) {
        const CheckReport commutation = check_commutation_preservation(aug);
        report.merge(commutation);
        stats["commutation"] = commutation.pass;
      }
      const CheckReport simulation = check_ghost_soundness_semantics(aug, init, limits_of(o));
      report.merge(simulation);
      stats["simulation"] = simulation.pass;
      r.j["stats"] = std::move(stats);
      return finish(report);
    }

    const tso::Mode mode = mode_of(o.model);
    const auto classes = tso::classify_variables(p, doc.declared_classes);
    const CheckReport shapes = tso::check_shapes(p, classes);
    if (!shapes.pass) {
      add_report(r, shapes);
      throw ValidationError("program is outside the TSO fragment: " +
                            shapes.witnesses.front().detail);
    }
    const State init = apply_overrides(vars, vars.initial_state(), o.init);
    const auto bridge = tso::bridge_check(p, init, classes, mode, tso::TsoLimits{o.max_states});
    r.j["model"] = o.model;
    r.j["behaviors"] = state_list(bridge.behaviors, vars);
    r.j["stats"] = Json{{"traces", bridge.traces},
                        {"complete", bridge.complete},
                        {"valid", bridge.valid}};
    r.text.push_back("traces: " + std::to_string(bridge.traces) +
                     ", complete: " + std::to_string(bridge.complete) +
                     ", CC-valid: " + std::to_string(bridge.valid));
    return finish(bridge.report);
  });
}

int cmd_corpus(const CorpusOptions& o, std::ostream& out, std::ostream&) {
  const auto start = Clock::now();
  const auto rows = run_acceptance(o.dir);
  bool all = true;
  for (const auto& row : rows) {
    all = all && row.pass;
    if (o.json) {
      Json j{{"command", "corpus"},
             {"row", row.name},
             {"verdict", row.pass ? "pass" : "fail"},
             {"detail", row.detail}};
      out << j.dump() << "\n";
    } else {
      out << (row.pass ? "PASS  " : "FAIL  ") << row.name;
      if (!row.detail.empty()) out << "  " << row.detail;
      out << "\n";
    }
  }
  if (o.json) {
    Json summary{{"command", "corpus"},
                 {"row", "summary"},
                 {"verdict", all ? "pass" : "fail"},
                 {"rows", rows.size()},
                 {"wall_time_ms",
                  std::chrono::duration<double, std::milli>(Clock::now() - start).count()}};
    out << summary.dump() << "\n";
  }
  return all ? kOk : kFailed;
}

}  // namespace ccm::cli
