// gramwb: parse, corpus, unify, show-tree.
// Exit codes: 0 ok, 1 no parse / clash / failing corpus, 2 usage or load error.

#include <CLI11.hpp>
#include <iostream>

#include "gramwb/corpus.hpp"

using namespace gramwb;

namespace {

struct Options {
  std::string engine, grammar, config, format = "text";
  std::string sentence, corpus, tree;
  std::string left, right;
};

int fail(const std::string& msg) {
  std::cerr << "gramwb: " << msg << '\n';
  return 2;
}

std::optional<corpus::Target> target(const Options& o) {
  auto e = corpus::engine_from_name(o.engine);
  if (!e) return std::nullopt;
  corpus::Target t{*e, o.grammar, o.config};
  if (t.grammar.empty()) t.grammar = *e == corpus::Engine::ug ? "ug-base" : "tag-base";
  if (t.config.empty()) t.config = *e == corpus::Engine::ug ? "merged" : "baseline";
  bool ok = *e == corpus::Engine::ug ? ug::ChannelConfig::by_name(t.config).has_value()
                                     : tag::config_from_name(t.config).has_value();
  if (!ok) return std::nullopt;
  return t;
}

int cmd_parse(const Options& o) {
  auto t = target(o);
  if (!t) return fail("config '" + o.config + "' does not apply to engine " + o.engine);
  auto tokens = dsl::split_ws(o.sentence);
  if (tokens.empty()) return fail("empty sentence");
  if (o.format != "text" && o.format != "records") return fail("unknown format '" + o.format + "'");
  bool records = o.format == "records";
  std::size_t n = 0;
  if (t->engine == corpus::Engine::ug) {
    auto g = dsl::load_ug_grammar(t->grammar);
    for (const auto& p : ug::ug_parse(g, tokens, *ug::ChannelConfig::by_name(t->config))) {
      ++n;
      std::set<std::string> bs;
      for (const auto& b : p.bindings) bs.insert(corpus::binding_string(b));
      if (records) {
        std::cout << n << '\t' << p.bracketed << '\t' << corpus::join(bs) << '\n';
        continue;
      }
      std::cout << "parse " << n << ": " << p.bracketed << '\n';
      for (const auto& b : p.bindings)
        std::cout << "  " << b.filler << " -> " << b.gap << "  " << channel_name(b.channel) << "  "
                  << ug::span_text(b.filler, tokens) << '\n';
    }
  } else {
    auto g = dsl::load_tag_grammar(t->grammar);
    for (const auto& p : tag::tag_parse(g, tokens, *tag::config_from_name(t->config))) {
      ++n;
      if (records) {
        std::cout << n << '\t' << p.bracketed << '\t' << p.ops << '\n';
        continue;
      }
      std::cout << "parse " << n << ": " << p.bracketed << "\n  ops: " << p.ops << '\n';
    }
  }
  if (!records) std::cout << n << (n == 1 ? " parse\n" : " parses\n");
  return n > 0 ? 0 : 1;
}

int cmd_corpus(const Options& o) {
  auto c = corpus::read_corpus(o.corpus.empty() ? corpus::bundled_corpus() : std::filesystem::path(o.corpus));
  corpus::RunOptions opt;
  if (!o.engine.empty()) {
    auto e = corpus::engine_from_name(o.engine);
    if (!e) return fail("unknown engine '" + o.engine + "'");
    opt.engines.insert(*e);
  }
  auto r = corpus::run_corpus(c, opt);
  std::cout << corpus::export_report(r, o.format);
  return r.failed == 0 ? 0 : 1;
}

int cmd_unify(const Options& o) {
  auto a = fs::fs_parse(o.left);
  auto b = fs::fs_parse(o.right);
  auto r = fs::fs_unify_explain(a, b);
  if (auto* c = std::get_if<fs::Clash>(&r)) {
    std::cout << "CLASH at " << (c->path.empty() ? "<root>" : fs::path_string(c->path)) << (c->cyclic ? " (cycle)" : "")
              << '\n';
    return 1;
  }
  std::cout << fs::fs_print(std::get<fs::FeatureStructure>(r)) << '\n';
  return 0;
}

void list_node(const tag::TreeNode& n, const std::string& addr, const std::vector<std::string>& avms, std::size_t& k,
               int depth, std::ostream& os) {
  std::string head = n.label.str();
  switch (n.kind) {
    case tag::NodeKind::anchor: head += n.word.empty() ? "^_" : "^" + n.word; break;
    case tag::NodeKind::substitution: head += "!"; break;
    case tag::NodeKind::foot: head += "*"; break;
    case tag::NodeKind::internal: break;
  }
  if (n.na) head += " na";
  for (const auto& op : n.gaps) head += std::string(op.push ? " push=" : " pop=") + channel_name(op.channel);
  os << std::string(static_cast<std::size_t>(2 * depth), ' ') << head << "  @" << addr << "\n";
  std::string pad(static_cast<std::size_t>(2 * depth + 4), ' ');
  os << pad << "top " << avms[2 * k] << '\n' << pad << "bot " << avms[2 * k + 1] << '\n';
  ++k;
  for (std::size_t i = 0; i < n.children.size(); ++i)
    list_node(n.children[i], addr == "0" ? std::to_string(i + 1) : addr + "." + std::to_string(i + 1), avms, k,
              depth + 1, os);
}

int cmd_show_tree(const Options& o) {
  if (!o.engine.empty() && o.engine != "tag") return fail("show-tree needs the tag engine");
  std::string config = o.config.empty() ? "baseline" : o.config;
  auto c = tag::config_from_name(config);
  if (!c) return fail("config '" + config + "' does not apply to engine tag");
  auto raw = dsl::load_tag_grammar(o.grammar.empty() ? "tag-base" : o.grammar);
  // gap trees vanish under baseline; show them anyway, unthreaded
  auto g = *c == tag::TagConfig::gap_ext ? tag::configure(raw, *c) : raw;
  const auto* t = g.find(o.tree);
  if (!t) return fail("no tree '" + o.tree + "' in grammar " + g.name);
  std::vector<fs::Path> paths;
  t->each_node([&](const tag::TreeNode& n) {
    std::string key = "n" + std::to_string(n.index);
    paths.push_back({key, "t"});
    paths.push_back({key, "b"});
  });
  auto avms = fs::fs_print_parts(t->fs, paths);
  std::cout << "tree " << t->name << (t->kind == tag::TreeKind::initial ? " initial" : " auxiliary") << '\n';
  std::size_t k = 0;
  list_node(t->root, "0", avms, k, 1, std::cout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"grammar workbench: unification and tree-adjoining grammar engines"};
  app.require_subcommand(1);
  Options o;
  const std::vector<std::string> formats{"text", "records"};
  const std::vector<std::string> configs{"merged", "channelized", "baseline", "gap-ext"};

  auto* parse = app.add_subcommand("parse", "parse one sentence");
  parse->add_option("--engine", o.engine, "ug or tag")->required()->check(CLI::IsMember({"ug", "tag"}));
  parse->add_option("--grammar", o.grammar, "fragment name or path (default ug-base / tag-base)");
  parse->add_option("--config", o.config, "merged, channelized, baseline, gap-ext")->check(CLI::IsMember(configs));
  parse->add_option("--format", o.format, "text or records")->check(CLI::IsMember(formats));
  parse->add_option("sentence", o.sentence, "tokens separated by spaces")->required();

  auto* corp = app.add_subcommand("corpus", "run a judgment corpus");
  corp->add_option("file", o.corpus, "corpus file (default: the bundled corpus)");
  corp->add_option("--engine", o.engine, "only entries for this engine")->check(CLI::IsMember({"ug", "tag"}));
  corp->add_option("--format", o.format, "text or records")->check(CLI::IsMember(formats));

  auto* unify = app.add_subcommand("unify", "unify two AVMs");
  unify->add_option("a", o.left)->required();
  unify->add_option("b", o.right)->required();

  auto* show = app.add_subcommand("show-tree", "list an elementary tree's nodes with top/bot AVMs");
  show->add_option("--engine", o.engine)->check(CLI::IsMember({"tag"}));
  show->add_option("--grammar", o.grammar, "fragment name or path (default tag-base)");
  show->add_option("--config", o.config, "baseline or gap-ext (threaded)")->check(CLI::IsMember(configs));
  show->add_option("tree", o.tree, "tree name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*parse) return cmd_parse(o);
    if (*corp) return cmd_corpus(o);
    if (*unify) return cmd_unify(o);
    if (*show) return cmd_show_tree(o);
  } catch (const UnknownToken& e) {
    return fail(e.what());
  } catch (const dsl::GrammarError& e) {
    return fail(e.what());
  } catch (const corpus::CorpusError& e) {
    return fail(e.what());
  } catch (const fs::ParseError& e) {
    return fail(e.what());
  } catch (const corpus::UnknownFormat& e) {
    return fail(e.what());
  }
  return 2;
}
