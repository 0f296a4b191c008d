#include "kcomm/kspec.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "kcomm/error.hpp"

namespace kcomm {
namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  KSpec parse() {
    skip_space();
    if (pos_ == text_.size()) throw Error(ErrorKind::EmptySpec, "specification is empty");
    KSpec spec;
    group(spec);
    if (!at_end()) fail(spec.steps.empty() ? "'#'" : "'#' or end of input");
    if (spec.steps.empty()) fail("'#'");
    return spec;
  }

 private:
  void group(KSpec& spec) {
    skip_space();
    if (peek() == '(') {
      ++pos_;
      group(spec);
      skip_space();
      expect(')');
    } else {
      spec.first_layer = identifier("layer name");
      visited_.insert(spec.first_layer);
      last_ = spec.first_layer;
    }
    while (true) {
      skip_space();
      if (peek() != '#') break;
      spec.steps.push_back(theta());
    }
  }

  Composition theta() {
    const std::size_t op_pos = pos_;
    ++pos_;  // '#'
    Composition c;
    std::optional<std::pair<LayerId, LayerId>> subscript;
    if (peek() == '(') {
      ++pos_;
      skip_space();
      auto l = identifier("layer name");
      skip_space();
      expect(',');
      skip_space();
      auto r = identifier("layer name");
      skip_space();
      expect(')');
      subscript = {l, r};
    }
    if (peek() == ':') {
      ++pos_;
      auto metric = pos_ < text_.size() ? parse_metric(text_.substr(pos_, 1)) : std::nullopt;
      if (!metric) fail("metric 'e', 'd' or 'h'");
      ++pos_;
      c.metric = metric;
    }
    skip_space();
    if (peek() == '(') {
      throw Error(ErrorKind::NonSerialSpec, "position " + std::to_string(pos_) +
                                                ": a parenthesised right operand needs non-serial precedence, "
                                                "which is not supported");
    }
    const std::size_t right_pos = pos_;
    auto right = identifier("layer name");
    if (subscript) {
      if (subscript->second != right) {
        throw Error(ErrorKind::SubscriptMismatch, "position " + std::to_string(op_pos) + ": subscript right layer '" +
                                                      subscript->second + "' does not match operand '" + right + "'");
      }
      if (!visited_.contains(subscript->first)) {
        throw Error(ErrorKind::SubscriptMismatch, "position " + std::to_string(op_pos) + ": subscript left layer '" +
                                                      subscript->first + "' has not been composed yet");
      }
      c.left = subscript->first;
    } else {
      c.left = last_;
    }
    c.right = right;
    if (c.left == c.right) {
      throw Error(ErrorKind::SubscriptMismatch,
                  "position " + std::to_string(right_pos) + ": a layer cannot be composed with itself");
    }
    c.revisit = visited_.contains(right);
    visited_.insert(right);
    last_ = right;
    return c;
  }

  std::string identifier(const char* what) {
    if (pos_ >= text_.size() || !std::isalpha(static_cast<unsigned char>(text_[pos_]))) fail(what);
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("'") + c + "'");
    ++pos_;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  bool at_end() {
    skip_space();
    return pos_ == text_.size();
  }
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& expected) const {
    std::string found = pos_ < text_.size() ? "'" + std::string(1, text_[pos_]) + "'" : "end of input";
    throw Error(ErrorKind::SyntaxError,
                "position " + std::to_string(pos_) + ": expected " + expected + ", found " + found);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::set<LayerId> visited_;
  LayerId last_;
};

}  // namespace

std::vector<LayerId> KSpec::layer_order() const {
  std::vector<LayerId> order{first_layer};
  for (const auto& s : steps) {
    for (const auto* l : {&s.left, &s.right}) {
      if (std::find(order.begin(), order.end(), *l) == order.end()) order.push_back(*l);
    }
  }
  return order;
}

std::size_t KSpec::cycle_steps() const {
  return static_cast<std::size_t>(std::count_if(steps.begin(), steps.end(), [](const auto& s) { return s.revisit; }));
}

KSpec parse_spec(std::string_view text) { return Parser(text).parse(); }

std::vector<KSpec> parse_spec_lines(std::string_view text) {
  std::vector<KSpec> specs;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (auto c = line.find(';'); c != std::string_view::npos) line = line.substr(0, c);
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) specs.push_back(parse_spec(line));
    start = end + 1;
  }
  return specs;
}

KSpec validate_spec(KSpec spec, const MLN& mln) {
  if (spec.first_layer.empty() || spec.steps.empty()) throw Error(ErrorKind::EmptySpec, "specification is empty");
  std::set<LayerId> visited{spec.first_layer};
  for (auto& s : spec.steps) {
    for (const auto* layer : {&s.left, &s.right}) {
      if (!mln.has_layer(*layer)) {
        throw Error(ErrorKind::MissingInterLayerEdges,
                    "layer " + *layer + " is not part of the MLN, so " + s.left + "," + s.right + " has no inter-layer edges");
      }
    }
    if (!visited.contains(s.left)) {
      throw Error(ErrorKind::DisconnectedSpec, "layer " + s.left + " is composed before it is reached");
    }
    if (s.left == s.right) throw Error(ErrorKind::SubscriptMismatch, "layer " + s.left + " composed with itself");
    if (!mln.has_interlayer(s.left, s.right)) {
      throw Error(ErrorKind::MissingInterLayerEdges, "no inter-layer edges between " + s.left + " and " + s.right);
    }
    s.revisit = visited.contains(s.right);
    visited.insert(s.right);
  }
  return spec;
}

std::string render_spec(const KSpec& spec) {
  std::string out = spec.first_layer;
  for (const auto& s : spec.steps) {
    out += " #(" + s.left + "," + s.right + ")";
    if (s.metric) out += std::string(":") + metric_char(*s.metric);
    out += " " + s.right;
  }
  return out;
}

std::string render_spec_unicode(const KSpec& spec) {
  std::string out = spec.first_layer;
  for (const auto& s : spec.steps) {
    out += " Θ_{" + s.left + "," + s.right + "}";
    if (s.metric) out += std::string("^") + metric_char(*s.metric);
    out += " " + s.right;
  }
  return out;
}

}  // namespace kcomm
