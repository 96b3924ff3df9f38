#include "bac/script.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "bac/ops.hpp"
#include "bac/serde.hpp"

namespace bac {

const Node& Workspace::get(const std::string& slot) const {
  auto it = slots_.find(slot);
  if (it == slots_.end()) throw UsageError("no slot named '" + slot + "'");
  return it->second;
}

void Workspace::set(const std::string& slot, Node node) {
  auto report = validate(node);
  if (!report.ok()) throw LawError(std::move(report));
  slots_.insert_or_assign(slot, std::move(node));
}

std::vector<std::string> tokenize(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  std::vector<std::string> words;
  std::istringstream in{std::string(line)};
  for (std::string w; in >> w;) words.push_back(std::move(w));
  return words;
}

namespace {

// -- token parsing ---------------------------------------------------------------

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::pair<std::string, std::string> split_once(std::string_view s, char sep, std::string_view what) {
  std::size_t pos = s.find(sep);
  if (pos == std::string_view::npos) {
    throw UsageError("expected " + std::string(what) + ", got '" + std::string(s) + "'");
  }
  return {std::string(s.substr(0, pos)), std::string(s.substr(pos + 1))};
}

Symbol parse_sym(std::string_view s) {
  Symbol v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw UsageError("expected a symbol, got '" + std::string(s) + "'");
  }
  return v;
}

std::vector<Symbol> parse_syms(std::string_view s) {
  std::vector<Symbol> out;
  for (const auto& w : split(s, ',')) out.push_back(parse_sym(w));
  return out;
}

Chain2 parse_chain(std::string_view s) {
  auto [a, b] = split_once(s, ',', "a chain s1,s2");
  return Chain2{parse_sym(a), parse_sym(b)};
}

std::vector<Chain2> parse_chains(std::string_view s) {
  std::vector<Chain2> out;
  for (const auto& w : split(s, ';')) out.push_back(parse_chain(w));
  return out;
}

Dict parse_dict(std::string_view s) {
  Dict d;
  for (const auto& w : split(s, ',')) {
    auto [k, v] = split_once(w, '=', "an entry k=v");
    if (!d.emplace(parse_sym(k), parse_sym(v)).second) throw UsageError("key " + k + " given twice");
  }
  return d;
}

/// "s1,s2=sym;s1,s2=sym"
std::map<Chain2, Symbol> parse_chain_map(std::string_view s) {
  std::map<Chain2, Symbol> out;
  for (const auto& w : split(s, ';')) {
    auto [c, v] = split_once(w, '=', "an entry s1,s2=sym");
    if (!out.emplace(parse_chain(c), parse_sym(v)).second) throw UsageError("chain " + c + " given twice");
  }
  return out;
}

bool valid_slot(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

std::string chain_arg(Chain2 c) { return std::to_string(c.fst) + "," + std::to_string(c.snd); }

// -- command arguments -------------------------------------------------------------

struct Args {
  std::string verb;
  std::vector<std::string> pos;
  /// Values of each occurrence of a flag, in order.
  std::map<std::string, std::vector<std::string>> flags;

  void arity(std::size_t lo, std::size_t hi, std::string_view usage) const {
    if (pos.size() < lo || pos.size() > hi) throw UsageError("usage: " + std::string(usage));
  }
  void allow(std::initializer_list<std::string_view> names) const {
    for (const auto& [f, vals] : flags) {
      if (std::find(names.begin(), names.end(), f) == names.end()) {
        throw UsageError("'" + verb + "' does not take --" + f);
      }
    }
  }
  const std::vector<std::string>& flag(const std::string& name) const {
    static const std::vector<std::string> none;
    auto it = flags.find(name);
    return it == flags.end() ? none : it->second;
  }
  std::string slot(std::size_t i) const {
    if (!valid_slot(pos.at(i))) throw UsageError("bad slot name '" + pos.at(i) + "'");
    return pos.at(i);
  }
  Symbol sym(std::size_t i) const { return parse_sym(pos.at(i)); }
};

Args parse_args(const std::vector<std::string>& words) {
  Args a;
  a.verb = words.front();
  std::string* current = nullptr;
  std::string flag;
  for (std::size_t i = 1; i < words.size(); ++i) {
    const std::string& w = words[i];
    if (w.starts_with("--")) {
      flag = w.substr(2);
      if (flag.empty()) throw UsageError("empty flag");
      a.flags[flag].emplace_back();
      current = &a.flags[flag].back();
      continue;
    }
    if (current == nullptr) {
      a.pos.push_back(w);
    } else {
      // Several values after one flag are joined as if separated by ';'.
      if (!current->empty()) *current += ';';
      *current += w;
    }
  }
  return a;
}

std::string expand_alias(const std::string& verb) {
  static const std::map<std::string, std::string> aliases{
      {"incident", "add-nd"},     {"disconnect", "split-sym"}, {"unincident", "remove-nd"},
      {"connect", "merge-syms"},  {"remove", "remove-node"},   {"split", "split-node"},
      {"merge", "merge-nodes"},
  };
  auto it = aliases.find(verb);
  return it == aliases.end() ? verb : it->second;
}

Inserter table_inserter(std::map<Chain2, Symbol> table) {
  return [table = std::move(table)](Chain2 c) -> Symbol {
    auto it = table.find(c);
    if (it == table.end()) throw Error(ErrorKind::InserterClash, "no --insert entry for " + chain_arg(c));
    return it->second;
  };
}

Splitter table_splitter(std::map<Chain2, Symbol> table) {
  return [table = std::move(table)](Chain2 c) -> std::optional<Symbol> {
    auto it = table.find(c);
    if (it == table.end()) return std::nullopt;
    return it->second;
  };
}

std::size_t distinct_nodes(const Node& n) {
  std::size_t count = 0;
  fold<int>(n, [&](const Node&, std::span<const int>) {
    ++count;
    return 0;
  });
  return count;
}

std::string join_syms(const std::vector<Symbol>& syms) {
  std::string out;
  for (Symbol s : syms) out += (out.empty() ? "" : " ") + std::to_string(s);
  return out;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Interpreter::Interpreter(std::ostream& out, ScriptOptions opts) : out_(out), opts_(std::move(opts)) {}

int Interpreter::run(std::string_view script) {
  Workspace saved = ws_;
  int status = kExitOk;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= script.size()) {
    std::size_t end = script.find('\n', start);
    if (end == std::string_view::npos) end = script.size();
    ++line_no;
    int s = execute(script.substr(start, end - start), line_no);
    if (s != kExitOk && status == kExitOk) status = s;
    if (s != kExitOk && !opts_.keep_going) break;
    start = end + 1;
  }
  if (opts_.dry_run) ws_ = std::move(saved);
  return status;
}

int Interpreter::execute(std::string_view line, std::size_t line_no) {
  auto words = tokenize(line);
  if (words.empty()) return kExitOk;
  std::string echo;
  for (const auto& w : words) echo += (echo.empty() ? "" : " ") + w;
  out_ << line_no << ": " << echo << "\n";

  auto paint = [&](std::string_view text, const char* code) {
    return opts_.color ? std::string("\x1b[") + code + "m" + std::string(text) + "\x1b[0m" : std::string(text);
  };
  auto fail = [&](int status, std::string_view kind, std::string_view msg) {
    out_ << "   " << paint("error", "31") << " line " << line_no << ": " << kind << ": " << msg << "\n";
    return status;
  };

  Workspace next = ws_;
  std::vector<Write> writes;
  try {
    dispatch(words, next, writes);
    for (const auto& p : writes) {
      if (opts_.dry_run) {
        out_ << "   (dry run) would write " << p.path.string() << "\n";
        continue;
      }
      std::ofstream f(p.path, std::ios::binary);
      if (!(f << p.text)) throw std::runtime_error("cannot write " + p.path.string());
    }
  } catch (const UsageError& e) {
    return fail(kExitUsage, "usage", e.what());
  } catch (const ParseError& e) {
    return fail(kExitUsage, to_string(e.kind()), e.what());
  } catch (const Error& e) {
    return fail(kExitFailure, to_string(e.kind()), e.what());
  } catch (const std::exception& e) {
    return fail(kExitFailure, "io", e.what());
  }
  ws_ = std::move(next);
  return kExitOk;
}

void Interpreter::dispatch(const std::vector<std::string>& words, Workspace& ws, std::vector<Write>& writes) {
  Args a = parse_args(words);
  const std::string verb = expand_alias(a.verb);
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : opts_.base_dir / path;
  };
  auto report = [&](const std::string& slot) {
    const Node& n = ws.get(slot);
    out_ << "   ok " << slot << ": " << symbols(n).size() - 1 << " objects, " << distinct_nodes(n) << " nodes\n";
  };
  auto store = [&](const std::string& slot, Node n) {
    ws.set(slot, std::move(n));
    report(slot);
  };

  if (verb == "new" || verb == "nullitope") {
    a.allow({});
    if (verb == "nullitope") {
      a.arity(1, 1, "nullitope <slot>");
      return store(a.slot(0), empty());
    }
    a.arity(2, 3, "new <slot> empty | new <slot> singleton <sym>");
    if (a.pos[1] == "empty" && a.pos.size() == 2) return store(a.slot(0), empty());
    if (a.pos[1] == "singleton" && a.pos.size() == 3) return store(a.slot(0), singleton(a.sym(2)));
    throw UsageError("usage: new <slot> empty | new <slot> singleton <sym>");
  }
  if (verb == "load") {
    a.allow({});
    a.arity(2, 2, "load <slot> <path>");
    return store(a.slot(0), parse(read_file(resolve(a.pos[1]))));
  }
  if (verb == "save") {
    a.allow({});
    a.arity(2, 2, "save <slot> <path>");
    writes.push_back({resolve(a.pos[1]), print(ws.get(a.slot(0))) + "\n"});
    out_ << "   ok saved " << a.pos[0] << "\n";
    return;
  }
  if (verb == "draw") {
    a.allow({});
    a.arity(2, 2, "draw <slot> <path>");
    writes.push_back({resolve(a.pos[1]), to_dot(ws.get(a.slot(0)))});
    out_ << "   ok drew " << a.pos[0] << "\n";
    return;
  }
  if (verb == "show") {
    a.allow({});
    a.arity(1, 1, "show <slot>");
    const Node& n = ws.get(a.slot(0));
    out_ << "   " << print(n) << "\n   symbols: " << join_syms(symbols(n)) << "\n";
    return;
  }
  if (verb == "validate") {
    a.allow({});
    a.arity(1, 1, "validate <slot>");
    auto r = validate(ws.get(a.slot(0)));
    out_ << "   " << (r.ok() ? "ok valid" : r.to_string()) << "\n";
    return;
  }
  if (verb == "merge-roots" || verb == "introduce") {
    a.allow({});
    std::vector<Node> nodes;
    if (verb == "introduce") {
      a.arity(2, 2, "introduce <slot> <sym>");
      nodes = {ws.get(a.slot(0)), singleton(a.sym(1))};
    } else {
      a.arity(2, SIZE_MAX, "merge-roots <slot> <slot>+");
      for (std::size_t i = 0; i < a.pos.size(); ++i) nodes.push_back(ws.get(a.slot(i)));
    }
    return store(a.slot(0), merge_root_nodes(nodes));
  }
  if (verb == "remove-leaf") {
    a.allow({});
    a.arity(2, 2, "remove-leaf <slot> <sym>");
    return store(a.slot(0), remove_leaf_node(ws.get(a.slot(0)), a.sym(1)));
  }
  if (verb == "remove-node") {
    a.allow({});
    a.arity(2, 2, "remove-node <slot> <sym>");
    return store(a.slot(0), remove_node(ws.get(a.slot(0)), a.sym(1)));
  }
  if (verb == "remove-nd") {
    a.allow({});
    a.arity(3, 3, "remove-nd <slot> <src> <tgt>");
    return store(a.slot(0), remove_nd_symbol(ws.get(a.slot(0)), a.sym(1), a.sym(2)));
  }
  if (verb == "add-nd") {
    a.allow({"coangle", "angle"});
    a.arity(4, 4, "add-nd <slot> <src> <tgt> <sym> [--coangle s1,s2:s1,s2]* [--angle s1,s2:s1,s2]*");
    std::vector<Coangle> cs;
    std::vector<Angle> as;
    for (const auto& v : a.flag("coangle")) {
      for (const auto& item : split(v, ';')) {
        auto [l, r] = split_once(item, ':', "a coangle s1,s2:s1,s2");
        cs.push_back(Coangle{parse_chain(l), parse_chain(r)});
      }
    }
    for (const auto& v : a.flag("angle")) {
      for (const auto& item : split(v, ';')) {
        auto [l, r] = split_once(item, ':', "an angle s1,s2:s1,s2");
        as.push_back(Angle{parse_chain(l), parse_chain(r)});
      }
    }
    return store(a.slot(0), add_nd_symbol(ws.get(a.slot(0)), a.sym(1), a.sym(2), a.sym(3), cs, as));
  }
  if (verb == "add-leaf") {
    a.allow({"insert"});
    a.arity(3, 3, "add-leaf <slot> <src> <sym> [--insert s1,s2=sym ...]");
    std::map<Chain2, Symbol> table;
    for (const auto& v : a.flag("insert")) table.merge(parse_chain_map(v));
    return store(a.slot(0), add_leaf_node(ws.get(a.slot(0)), a.sym(1), a.sym(2), table_inserter(std::move(table))));
  }
  if (verb == "interpolate-init") {
    a.allow({"map"});
    a.arity(3, 3, "interpolate-init <slot> <tgt> <sym> --map k=v,...");
    if (a.flag("map").size() != 1) throw UsageError("interpolate-init needs exactly one --map");
    return store(a.slot(0), add_parent_node_on_root(ws.get(a.slot(0)), a.sym(1), a.sym(2), parse_dict(a.flag("map")[0])));
  }
  if (verb == "add-parent") {
    a.allow({"map", "insert"});
    a.arity(4, 4, "add-parent <slot> <src> <tgt> <sym> --map k=v,... [--insert s1,s2=sym ...]");
    if (a.flag("map").size() != 1) throw UsageError("add-parent needs exactly one --map");
    std::map<Chain2, Symbol> table;
    for (const auto& v : a.flag("insert")) table.merge(parse_chain_map(v));
    return store(a.slot(0), add_parent_node(ws.get(a.slot(0)), Chain2{a.sym(1), a.sym(2)}, a.sym(3),
                                            parse_dict(a.flag("map")[0]), table_inserter(std::move(table))));
  }
  if (verb == "split-sym") {
    a.allow({"part"});
    a.arity(3, 3, "split-sym <slot> <src> <tgt> --part sym=s1,s2;s1,s2 ...");
    PrefixPartition partition;
    for (const auto& v : a.flag("part")) {
      auto [s, chains] = split_once(v, '=', "a part sym=s1,s2;...");
      partition.emplace_back(parse_sym(s), parse_chains(chains));
    }
    return store(a.slot(0), split_symbol(ws.get(a.slot(0)), a.sym(1), a.sym(2), partition));
  }
  if (verb == "split-root") {
    a.allow({});
    a.arity(2, SIZE_MAX, "split-root <slot> <out-slot>=syms ...");
    SymbolPartition partition;
    std::vector<std::string> outs;
    for (std::size_t i = 1; i < a.pos.size(); ++i) {
      auto [slot, syms] = split_once(a.pos[i], '=', "an output out-slot=syms");
      if (!valid_slot(slot)) throw UsageError("bad slot name '" + slot + "'");
      outs.push_back(slot);
      partition.push_back(parse_syms(syms));
    }
    auto parts = split_root_node(ws.get(a.slot(0)), partition);
    for (std::size_t i = 0; i < outs.size(); ++i) store(outs[i], std::move(parts[i]));
    return;
  }
  if (verb == "split-node") {
    a.allow({"part"});
    a.arity(2, 2, "split-node <slot> <tgt> --part syms:s1,s2=sym;... ...");
    std::vector<SplitPart> parts;
    for (const auto& v : a.flag("part")) {
      auto [syms, table] = split_once(v, ':', "a part syms:s1,s2=sym;...");
      parts.push_back(SplitPart{table_splitter(parse_chain_map(table)), parse_syms(syms)});
    }
    return store(a.slot(0), split_node(ws.get(a.slot(0)), a.sym(1), parts));
  }
  if (verb == "duplicate-sym") {
    a.allow({});
    a.arity(4, 4, "duplicate-sym <slot> <src> <tgt> <syms>");
    return store(a.slot(0), duplicate_nd_symbol(ws.get(a.slot(0)), a.sym(1), a.sym(2), parse_syms(a.pos[3])));
  }
  if (verb == "duplicate-node") {
    a.allow({"copy"});
    a.arity(2, 2, "duplicate-node <slot> <tgt> --copy s1,s2=sym;... ...");
    std::vector<Splitter> splitters;
    for (const auto& v : a.flag("copy")) splitters.push_back(table_splitter(parse_chain_map(v)));
    return store(a.slot(0), duplicate_node(ws.get(a.slot(0)), a.sym(1), splitters));
  }
  if (verb == "merge-syms") {
    a.allow({});
    a.arity(4, 4, "merge-syms <slot> <src> <syms> <sym>");
    return store(a.slot(0), merge_symbols(ws.get(a.slot(0)), a.sym(1), parse_syms(a.pos[2]), a.sym(3)));
  }
  if (verb == "merge-nodes") {
    a.allow({"tgt", "merge"});
    a.arity(1, 1, "merge-nodes <slot> --tgt sym=s1,s2;... ... [--merge s,r1,r2=sym ...]");
    std::vector<SuffixFamily> families;
    for (const auto& v : a.flag("tgt")) {
      auto [s, chains] = split_once(v, '=', "a family sym=s1,s2;...");
      families.push_back(SuffixFamily{parse_sym(s), parse_chains(chains)});
    }
    std::map<std::pair<Symbol, std::vector<Symbol>>, Symbol> table;
    for (const auto& v : a.flag("merge")) {
      for (const auto& item : split(v, ';')) {
        auto [key, s] = split_once(item, '=', "a merge entry s,r1,r2=sym");
        auto syms = parse_syms(key);
        if (syms.size() < 2) throw UsageError("a merge entry needs a source and members");
        table[{syms.front(), std::vector<Symbol>(syms.begin() + 1, syms.end())}] = parse_sym(s);
      }
    }
    Merger merger = [table](Symbol src, const std::vector<Symbol>& members) -> Symbol {
      auto it = table.find({src, members});
      if (it == table.end()) {
        std::string key = std::to_string(src);
        for (Symbol m : members) key += "," + std::to_string(m);
        throw Error(ErrorKind::MergerClash, "no --merge entry for " + key);
      }
      return it->second;
    };
    return store(a.slot(0), merge_nodes(ws.get(a.slot(0)), families, merger));
  }
  if (verb == "relabel") {
    a.allow({});
    a.arity(3, 3, "relabel <slot> <tgt> k=v,...");
    return store(a.slot(0), relabel(ws.get(a.slot(0)), a.sym(1), parse_dict(a.pos[2])));
  }
  if (verb == "rewire") {
    a.allow({});
    a.arity(3, 3, "rewire <slot> <tgt> <syms>");
    return store(a.slot(0), rewire(ws.get(a.slot(0)), a.sym(1), parse_syms(a.pos[2])));
  }
  if (verb == "partition-prefix") {
    a.allow({});
    a.arity(2, 2, "partition-prefix <slot> <tgt>");
    for (const auto& group : partition_prefix(ws.get(a.slot(0)), a.sym(1))) {
      std::string line;
      for (Chain2 c : group) line += (line.empty() ? "" : ";") + chain_arg(c);
      out_ << "   class " << line << "\n";
    }
    return;
  }
  if (verb == "partition-syms") {
    a.allow({});
    a.arity(1, 1, "partition-syms <slot>");
    for (const auto& group : partition_symbols(ws.get(a.slot(0)))) {
      std::string line;
      for (Symbol s : group) line += (line.empty() ? "" : ",") + std::to_string(s);
      out_ << "   class " << line << "\n";
    }
    return;
  }
  if (verb == "candidates") {
    a.allow({});
    a.arity(3, 3, "candidates <slot> <src> <tgt>");
    Picklists p = find_valid_coangles_angles(ws.get(a.slot(0)), a.sym(1), a.sym(2));
    for (const auto& list : p.coangles) {
      out_ << "   picklist";
      for (const Coangle& c : list) out_ << " --coangle " << chain_arg(c.short_chain) << ":" << chain_arg(c.long_chain);
      out_ << (list.empty() ? " (empty)" : "") << "\n";
    }
    for (const auto& list : p.angles) {
      out_ << "   picklist";
      for (const Angle& x : list) out_ << " --angle " << chain_arg(x.from_tgt) << ":" << chain_arg(x.from_src);
      out_ << (list.empty() ? " (empty)" : "") << "\n";
    }
    return;
  }
  throw UsageError("unknown command '" + a.verb + "'");
}

}  // namespace bac
