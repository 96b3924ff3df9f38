#include "bac/serde.hpp"

#include <cctype>
#include <charconv>
#include <unordered_map>

namespace bac {

namespace {

void print_into(const Node& node, std::string& out) {
  out += '[';
  bool first_edge = true;
  for (const Edge& e : node.edges()) {
    if (!first_edge) out += ',';
    first_edge = false;
    out += to_string(e.dict);
    out += ' ';
    print_into(e.target, out);
  }
  out += ']';
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Node parse_all() {
    Node n = parse_node();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input");
    return n;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  // Equal subtrees share storage, which keeps later comparisons cheap.
  std::unordered_map<Node, Node, NodeHash> interned_;

  [[noreturn]] void fail(const std::string& what) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(line, col, what);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void expect_arrow() {
    skip_ws();
    if (text_.substr(pos_, 2) != "->") fail("expected '->'");
    pos_ += 2;
  }

  Symbol parse_symbol() {
    skip_ws();
    Symbol value = 0;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec == std::errc::result_out_of_range) fail("symbol out of range");
    if (ec != std::errc() || ptr == begin) fail("expected a symbol");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return value;
  }

  Dict parse_dict() {
    expect('{');
    Dict dict;
    if (peek('}')) {
      ++pos_;
      return dict;
    }
    for (;;) {
      std::size_t at = pos_;
      Symbol k = parse_symbol();
      expect_arrow();
      Symbol v = parse_symbol();
      if (!dict.emplace(k, v).second) {
        pos_ = at;
        fail("duplicate key " + std::to_string(k));
      }
      if (peek(',')) {
        ++pos_;
        continue;
      }
      expect('}');
      return dict;
    }
  }

  Node parse_node() {
    expect('[');
    std::vector<Edge> edges;
    if (peek(']')) {
      ++pos_;
      return Node();
    }
    for (;;) {
      Dict dict = parse_dict();
      Node target = parse_node();
      edges.push_back(Edge{std::move(dict), std::move(target)});
      if (peek(',')) {
        ++pos_;
        continue;
      }
      expect(']');
      break;
    }
    Node n(std::move(edges));
    return interned_.try_emplace(n, n).first->second;
  }
};

}  // namespace

std::string print(const Node& node) {
  std::string out;
  print_into(node, out);
  return out;
}

Node parse_unchecked(std::string_view text) { return Parser(text).parse_all(); }

Node parse(std::string_view text) {
  Node n = parse_unchecked(text);
  auto report = validate(n);
  if (!report.ok()) throw LawError(std::move(report));
  return n;
}

std::string to_dot(const Node& node) {
  std::unordered_map<Node, std::size_t, NodeHash> ids;
  std::vector<Node> order;
  // Pre-order discovery, so the root is n0.
  std::vector<Node> stack{node};
  while (!stack.empty()) {
    Node n = stack.back();
    stack.pop_back();
    if (!ids.try_emplace(n, order.size()).second) continue;
    order.push_back(n);
    auto edges = n.edges();
    for (auto it = edges.rbegin(); it != edges.rend(); ++it) {
      if (!ids.contains(it->target)) stack.push_back(it->target);
    }
  }
  std::string out = "digraph bac {\n  rankdir=LR;\n  node [shape=box];\n";
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::string label;
    for (Symbol s : symbols(order[i])) label += (label.empty() ? "" : ",") + std::to_string(s);
    out += "  n" + std::to_string(i) + " [label=\"" + label + "\"];\n";
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (const Edge& e : order[i].edges()) {
      std::string label;
      for (auto [k, v] : e.dict) {
        if (!label.empty()) label += "\\n";
        label += std::to_string(k) + "->" + std::to_string(v);
      }
      out += "  n" + std::to_string(i) + " -> n" + std::to_string(ids.at(e.target)) + " [label=\"" + label + "\"];\n";
    }
  }
  out += "}\n";
  return out;
}

}  // namespace bac
