#include "causalnet/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "causalnet/causmodel.hpp"
#include "causalnet/corpus.hpp"
#include "causalnet/errors.hpp"
#include "causalnet/formula.hpp"
#include "causalnet/graphtype.hpp"
#include "causalnet/proofnet.hpp"
#include "causalnet/rewrite.hpp"

namespace causalnet {

namespace {

Json read_json_input(const std::string& path) {
  std::string text;
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return Json::parse(text);
  } catch (const std::exception& e) {
    throw ValidationError(std::string("invalid json: ") + e.what());
  }
}

ProofStructure structure_from_args(const std::string& formula_text,
                                   const std::string& structure_file) {
  if (!structure_file.empty()) return structure_from_json(read_json_input(structure_file));
  if (formula_text.empty())
    throw ValidationError("provide a formula argument or --structure FILE");
  Formula f = parse_formula(formula_text);
  if (!is_balanced(f))
    throw ValidationError("formula is not balanced: every atom needs exactly one "
                          "positive and one negative occurrence");
  return structure_of(f);
}

Dag graph_from_args(const std::string& vertices, const std::string& edges,
                    const std::string& json_file) {
  if (!json_file.empty()) return dag_from_json(read_json_input(json_file));
  if (vertices.empty()) throw ValidationError("provide --vertices/--edges or --json FILE");
  return dag_from_edge_list(vertices, edges);
}

Interpretation interp_from_args(const Formula& f, const std::string& interp_file,
                                std::size_t max_dim) {
  Interpretation phi;
  if (interp_file.empty()) {
    phi = default_interpretation(f);
  } else {
    Json j = read_json_input(interp_file);
    if (!j.is_object()) throw ValidationError("interpretation json must map atom names to objects");
    for (const auto& [name, obj] : j.items()) phi.atoms[name] = object_from_json(obj);
  }
  phi.max_dim = max_dim;
  return phi;
}

bool edges_acyclic(std::size_t n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> adj(n);
  std::vector<int> indeg(n, 0);
  for (auto [u, v] : edges) {
    adj[static_cast<std::size_t>(u)].push_back(v);
    ++indeg[static_cast<std::size_t>(v)];
  }
  std::vector<int> queue;
  for (std::size_t i = 0; i < n; ++i)
    if (indeg[i] == 0) queue.push_back(static_cast<int>(i));
  std::size_t seen = 0;
  while (seen < queue.size()) {
    int u = queue[seen++];
    for (int v : adj[static_cast<std::size_t>(u)])
      if (--indeg[static_cast<std::size_t>(v)] == 0) queue.push_back(v);
  }
  return seen == n;
}

Switching switching_from_csv(const ProofStructure& s, const std::string& csv) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : csv) {
    if (c == ',') {
      parts.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  parts.push_back(cur);
  if (parts.size() != s.links.size())
    throw ValidationError("switching needs one option per link (" +
                          std::to_string(s.links.size()) + " links)");
  Switching sw;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& names = link_options(s.links[i].kind);
    int found = -1;
    for (std::size_t k = 0; k < names.size(); ++k)
      if (names[k] == parts[i]) found = static_cast<int>(k);
    if (found < 0)
      throw ValidationError("link " + std::to_string(i) + " (" +
                            link_kind_name(s.links[i].kind) + ") has no option '" +
                            parts[i] + "'");
    sw.choice.push_back(found);
  }
  return sw;
}

GraphTypeMethod method_from_name(const std::string& name) {
  if (name == "signalling") return GraphTypeMethod::Signalling;
  if (name == "ordered") return GraphTypeMethod::Ordered;
  if (name == "local2") return GraphTypeMethod::Local2;
  throw ValidationError("unknown method '" + name + "' (signalling|ordered|local2)");
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"verifier and algebra toolkit for higher-order causal consistency"};
  app.name("causalnet");
  app.require_subcommand(1);

  std::function<int()> action;

  // Shared option holders (each subcommand binds the ones it uses).
  std::string formula_text, formula_text2, structure_file, json_file, json2_file;
  std::string vertices, edges, vertices2, edges2, vertex_name;
  std::string interp_file, method_name = "signalling", switching_csv, rewrite_kind;
  std::uint64_t max_switchings = std::uint64_t{1} << 26;
  std::size_t dense_limit = 256, max_dim = std::size_t{1} << 20, list_cap = 4096;
  bool prune = false, list_switchings = false;
  CorpusOptions corpus_opts;
  bool no_fo = false, no_units = false;

  // check: decide the proof-net criterion.
  {
    auto* c = app.add_subcommand("check", "decide whether a balanced formula (or structure) is a proof net");
    c->add_option("formula", formula_text, "formula in concrete syntax");
    c->add_option("--structure", structure_file, "proof structure json file ('-' for stdin)");
    c->add_option("--max-switchings", max_switchings, "switching-space guard");
    c->add_flag("--prune", prune, "test the all-down switching first (changes the reported witness)");
    c->callback([&]() {
      action = [&]() {
        ProofStructure s = structure_from_args(formula_text, structure_file);
        NetOptions no;
        no.max_switchings = max_switchings;
        no.prune_all_down = prune;
        NetVerdict v = is_proof_net(s, no);
        Json j = verdict_to_json(s, v);
        j["switching_count"] = switching_count(s).get_str();
        emit(out, j);
        return v.net ? 0 : 1;
      };
    });
  }

  // switchings: count / enumerate the switching space.
  {
    auto* c = app.add_subcommand("switchings", "count (or list) the switchings of a structure");
    c->add_option("formula", formula_text, "formula in concrete syntax");
    c->add_option("--structure", structure_file, "proof structure json file");
    c->add_flag("--list", list_switchings, "list every switching with its acyclicity");
    c->add_option("--max-list", list_cap, "guard for --list");
    c->callback([&]() {
      action = [&]() {
        ProofStructure s = structure_from_args(formula_text, structure_file);
        mpz_class count = switching_count(s);
        Json j;
        j["count"] = count.get_str();
        if (list_switchings) {
          if (count > static_cast<unsigned long>(list_cap))
            throw GuardError("switching space larger than --max-list");
          Json arr = Json::array();
          Switching sw;
          sw.choice.assign(s.links.size(), 0);
          for (;;) {
            Json item;
            item["options"] = switching_to_json(s, sw);
            item["acyclic"] =
                edges_acyclic(s.node_count(), switching_edges(s, sw));
            arr.push_back(std::move(item));
            std::size_t k = s.links.size();
            bool done = false;
            for (;;) {
              if (k == 0) {
                done = true;
                break;
              }
              --k;
              if (++sw.choice[k] <
                  static_cast<int>(link_options(s.links[k].kind).size()))
                break;
              sw.choice[k] = 0;
            }
            if (done) break;
          }
          j["switchings"] = std::move(arr);
        }
        emit(out, j);
        return 0;
      };
    });
  }

  // rewrite: structure-level encodings.
  {
    auto* c = app.add_subcommand("rewrite", "apply the pom or fo encoding to a structure");
    c->add_option("kind", rewrite_kind, "pom | fo")->required();
    c->add_option("formula", formula_text, "formula in concrete syntax");
    c->add_option("--structure", structure_file, "proof structure json file");
    c->callback([&]() {
      action = [&]() {
        ProofStructure s = structure_from_args(formula_text, structure_file);
        ProofStructure t;
        if (rewrite_kind == "pom")
          t = pom(s);
        else if (rewrite_kind == "fo")
          t = fo(s);
        else
          throw ValidationError("rewrite kind must be pom or fo");
        emit(out, structure_to_json(t));
        return 0;
      };
    });
  }

  // graph: the graph-type algebra.
  {
    auto* g = app.add_subcommand("graph", "standard forms, inclusion, compatibility, substitution");
    g->require_subcommand(1);
    auto add_first = [&](CLI::App* c) {
      c->add_option("--vertices", vertices, "e.g. \"a,b:fo,c:fo_dual,d:unit\" (default kind: generic)");
      c->add_option("--edges", edges, "e.g. \"a>b,b>c\"");
      c->add_option("--json", json_file, "graph json file");
    };
    auto add_second = [&](CLI::App* c) {
      c->add_option("--vertices2", vertices2, "second graph vertices");
      c->add_option("--edges2", edges2, "second graph edges");
      c->add_option("--json2", json2_file, "second graph json file");
    };

    auto* norm = g->add_subcommand("normalize", "transitive closure with degenerate edges pruned");
    add_first(norm);
    norm->callback([&]() {
      action = [&]() {
        emit(out, dag_to_json(standard_form(graph_from_args(vertices, edges, json_file))));
        return 0;
      };
    });

    auto* sorts = g->add_subcommand("sorts", "all topological sorts");
    add_first(sorts);
    sorts->callback([&]() {
      action = [&]() {
        Dag d = graph_from_args(vertices, edges, json_file);
        Json arr = Json::array();
        for (const auto& sort : topological_sorts(d)) {
          Json row = Json::array();
          for (int v : sort) row.push_back(d.names[static_cast<std::size_t>(v)]);
          arr.push_back(std::move(row));
        }
        Json j;
        j["sorts"] = std::move(arr);
        emit(out, j);
        return 0;
      };
    });

    auto* inc = g->add_subcommand("includes", "does every constraint of the first graph hold in the second");
    add_first(inc);
    add_second(inc);
    inc->callback([&]() {
      action = [&]() {
        Dag a = graph_from_args(vertices, edges, json_file);
        Dag b = graph_from_args(vertices2, edges2, json2_file);
        bool ok = includes(a, b);
        Json j;
        j["includes"] = ok;
        emit(out, j);
        return ok ? 0 : 1;
      };
    });

    auto* comp = g->add_subcommand("compatible", "can graph states of dual-kinded graphs always contract to 1");
    add_first(comp);
    add_second(comp);
    comp->callback([&]() {
      action = [&]() {
        Dag a = graph_from_args(vertices, edges, json_file);
        Dag b = graph_from_args(vertices2, edges2, json2_file);
        CompatResult r = compatible(a, b);
        Json j;
        j["compatible"] = r.compatible;
        if (!r.compatible) {
          Json cyc = Json::array();
          for (int v : r.cycle) cyc.push_back(a.names[static_cast<std::size_t>(v)]);
          j["cycle"] = std::move(cyc);
        }
        emit(out, j);
        return r.compatible ? 0 : 1;
      };
    });

    auto* sub = g->add_subcommand("subst", "splice the second graph in place of a vertex of the first");
    add_first(sub);
    sub->add_option("--vertex", vertex_name, "vertex of the first graph to replace")->required();
    add_second(sub);
    sub->callback([&]() {
      action = [&]() {
        Dag a = graph_from_args(vertices, edges, json_file);
        Dag b = graph_from_args(vertices2, edges2, json2_file);
        emit(out, dag_to_json(substitute(a, vertex_name, b)));
        return 0;
      };
    });
  }

  // sem: the exact-rational semantic model.
  {
    auto* s = app.add_subcommand("sem", "semantic model over exact rationals");
    s->require_subcommand(1);

    auto* chk = s->add_subcommand("check", "is the contraction of a balanced formula a causal state");
    chk->add_option("formula", formula_text, "formula in concrete syntax")->required();
    chk->add_option("--interp", interp_file, "json file mapping atom names to objects");
    chk->add_option("--dense-limit", dense_limit, "carrier size interpreted densely");
    chk->add_option("--max-dim", max_dim, "carrier dimension guard");
    chk->callback([&]() {
      action = [&]() {
        Formula f = parse_formula(formula_text);
        Interpretation phi = interp_from_args(f, interp_file, max_dim);
        ConsistencyOptions copts;
        copts.dense_limit = dense_limit;
        bool ok = consistent(f, phi, copts);
        Json j;
        j["consistent"] = ok;
        emit(out, j);
        return ok ? 0 : 1;
      };
    });

    auto* obj = s->add_subcommand("object", "interpret a formula as a causal object");
    obj->add_option("formula", formula_text, "formula in concrete syntax")->required();
    obj->add_option("--interp", interp_file, "json file mapping atom names to objects");
    obj->add_option("--max-dim", max_dim, "carrier dimension guard");
    obj->callback([&]() {
      action = [&]() {
        Formula f = parse_formula(formula_text);
        Interpretation phi = interp_from_args(f, interp_file, max_dim);
        emit(out, object_to_json(interpret(f, phi)));
        return 0;
      };
    });

    auto* gt = s->add_subcommand("graphtype", "graph type with default vertex objects");
    gt->add_option("--vertices", vertices, "graph vertices");
    gt->add_option("--edges", edges, "graph edges");
    gt->add_option("--json", json_file, "graph json file");
    gt->add_option("--method", method_name, "signalling | ordered | local2");
    gt->add_option("--max-dim", max_dim, "carrier dimension guard");
    gt->callback([&]() {
      action = [&]() {
        Dag d = graph_from_args(vertices, edges, json_file);
        CausalObject o = graph_type(d, default_gamma(d), method_from_name(method_name), max_dim);
        emit(out, object_to_json(o));
        return 0;
      };
    });
  }

  // export-dot: graphviz views.
  {
    auto* c = app.add_subcommand("export-dot", "render a structure, switching graph, or dag as graphviz");
    c->add_option("formula", formula_text, "formula in concrete syntax");
    c->add_option("--structure", structure_file, "proof structure json file");
    c->add_option("--switching", switching_csv, "comma-separated option per link");
    c->add_option("--vertices", vertices, "graph vertices");
    c->add_option("--edges", edges, "graph edges");
    c->add_option("--json", json_file, "graph json file");
    c->callback([&]() {
      action = [&]() {
        if (!vertices.empty() || !json_file.empty()) {
          out << dag_dot(graph_from_args(vertices, edges, json_file));
          return 0;
        }
        ProofStructure s = structure_from_args(formula_text, structure_file);
        if (switching_csv.empty())
          out << structure_dot(s);
        else
          out << switching_dot(s, switching_from_csv(s, switching_csv));
        return 0;
      };
    });
  }

  // corpus: deterministic random formula generation.
  {
    auto* c = app.add_subcommand("corpus", "generate random balanced formulae, one per line");
    c->add_option("--count", corpus_opts.count, "number of formulae");
    c->add_option("--seed", corpus_opts.seed, "rng seed");
    c->add_option("--max-pairs", corpus_opts.max_pairs, "atom pairs per formula");
    c->add_option("--max-units", corpus_opts.max_units, "unit leaves per formula");
    c->add_flag("--no-fo", no_fo, "regular atoms only");
    c->add_flag("--no-units", no_units, "no unit leaves");
    c->add_option("--max-switchings", corpus_opts.max_switchings, "shape cap");
    c->add_option("--max-total-dim", corpus_opts.max_total_dim, "shape cap");
    c->add_option("--max-block-dim", corpus_opts.max_block_dim, "shape cap");
    c->callback([&]() {
      action = [&]() {
        corpus_opts.allow_fo = !no_fo;
        corpus_opts.allow_units = !no_units;
        for (const Formula& f : generate_corpus(corpus_opts)) out << render(f) << "\n";
        return 0;
      };
    });
  }

  std::vector<const char*> argv;
  argv.push_back("causalnet");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    return action ? action() : 2;
  } catch (const ParseError& e) {
    Json j;
    j["error"] = "parse";
    j["message"] = e.what();
    j["offset"] = e.offset;
    err << j.dump(2) << "\n";
    return 2;
  } catch (const NotCompatibleError& e) {
    Json j;
    j["error"] = "not_compatible";
    j["message"] = e.what();
    err << j.dump(2) << "\n";
    return 2;
  } catch (const GuardError& e) {
    Json j;
    j["error"] = "guard";
    j["message"] = e.what();
    err << j.dump(2) << "\n";
    return 2;
  } catch (const ValidationError& e) {
    Json j;
    j["error"] = "validation";
    j["message"] = e.what();
    err << j.dump(2) << "\n";
    return 2;
  } catch (const Json::exception& e) {
    // missing keys or wrong types inside an input file
    Json j;
    j["error"] = "validation";
    j["message"] = e.what();
    err << j.dump(2) << "\n";
    return 2;
  } catch (const std::exception& e) {
    Json j;
    j["error"] = "internal";
    j["message"] = e.what();
    err << j.dump(2) << "\n";
    return 2;
  }
}

}  // namespace causalnet
