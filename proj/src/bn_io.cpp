// Copyright 2026 The popnet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "popnet/bn_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "popnet/errors.hpp"

namespace popnet {
namespace {

enum class Tok { Word, LBrace, RBrace, Comma, Colon, Pipe, Newline, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  std::size_t i = 0;
  auto special = [](char c) {
    return c == '{' || c == '}' || c == ',' || c == ':' || c == '|' ||
           c == '#';
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      out.push_back({Tok::Newline, "", line, col});
      ++i, ++line, col = 1;
    } else if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i, ++col;
    } else if (c == ' ' || c == '\t' || c == '\r') {
      ++i, ++col;
    } else if (special(c)) {
      Tok k = c == '{'   ? Tok::LBrace
              : c == '}' ? Tok::RBrace
              : c == ',' ? Tok::Comma
              : c == ':' ? Tok::Colon
                         : Tok::Pipe;
      out.push_back({k, std::string(1, c), line, col});
      ++i, ++col;
    } else {
      std::size_t start = i, start_col = col;
      while (i < text.size() && !special(text[i]) && text[i] != '\n' &&
             text[i] != ' ' && text[i] != '\t' && text[i] != '\r')
        ++i, ++col;
      out.push_back(
          {Tok::Word, std::string(text.substr(start, i - start)), line, start_col});
    }
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

struct RawRow {
  std::vector<Token> parent_labels;
  std::vector<Token> probs;
  std::size_t line;
};

struct RawCpt {
  Token child;
  std::vector<Token> parents;
  std::vector<RawRow> rows;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  BayesianNetwork run() {
    for (;;) {
      skip_newlines();
      const Token& t = peek();
      if (t.kind == Tok::End) break;
      if (t.kind == Tok::Word && t.text == "variable") {
        parse_variable();
      } else if (t.kind == Tok::Word && t.text == "cpt") {
        parse_cpt();
      } else {
        fail(t, "expected 'variable' or 'cpt', found '" + describe(t) + "'");
      }
    }
    return assemble();
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  [[noreturn]] static void fail(const Token& t, const std::string& msg) {
    throw ParseError(msg, t.line, t.column);
  }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Tok::Newline: return "end of line";
      case Tok::End: return "end of input";
      default: return t.text;
    }
  }

  void skip_newlines() {
    while (peek().kind == Tok::Newline) ++pos_;
  }

  const Token& expect(Tok kind, const char* what) {
    const Token& t = next();
    if (t.kind != kind)
      fail(t, std::string("expected ") + what + ", found '" + describe(t) + "'");
    return t;
  }

  // word {, word}  -- newlines are allowed between items when `multiline`.
  std::vector<Token> word_list(bool multiline) {
    std::vector<Token> out;
    for (;;) {
      if (multiline) skip_newlines();
      out.push_back(expect(Tok::Word, "a name"));
      if (multiline) skip_newlines();
      if (peek().kind != Tok::Comma) break;
      ++pos_;
    }
    return out;
  }

  void parse_variable() {
    const Token& kw = next();
    const Token& name = expect(Tok::Word, "a variable name");
    if (declared_.count(name.text))
      fail(name, "duplicate variable '" + name.text + "'");
    expect(Tok::LBrace, "'{'");
    auto labels = word_list(true);
    expect(Tok::RBrace, "'}'");
    end_of_statement();
    VariableSpec spec{name.text, {}};
    std::set<std::string> seen;
    for (const auto& l : labels) {
      if (!seen.insert(l.text).second)
        fail(l, "duplicate value '" + l.text + "' in domain of '" + name.text + "'");
      spec.domain.push_back(l.text);
    }
    declared_.emplace(name.text, vars_.size());
    vars_.push_back(std::move(spec));
    (void)kw;
  }

  void parse_cpt() {
    next();
    RawCpt cpt{expect(Tok::Word, "a variable name"), {}, {}};
    if (peek().kind == Tok::Pipe) {
      ++pos_;
      cpt.parents = word_list(false);
    }
    expect(Tok::LBrace, "'{'");
    for (;;) {
      skip_newlines();
      if (peek().kind == Tok::RBrace) {
        ++pos_;
        break;
      }
      if (peek().kind == Tok::End) fail(peek(), "unterminated cpt block");
      RawRow row;
      row.line = peek().line;
      auto first = word_list(false);
      if (peek().kind == Tok::Colon) {
        ++pos_;
        row.parent_labels = std::move(first);
        row.probs = word_list(false);
      } else {
        row.probs = std::move(first);
      }
      if (peek().kind != Tok::Newline && peek().kind != Tok::RBrace)
        fail(peek(), "expected end of row, found '" + describe(peek()) + "'");
      cpt.rows.push_back(std::move(row));
    }
    end_of_statement();
    cpts_.push_back(std::move(cpt));
  }

  void end_of_statement() {
    const Token& t = peek();
    if (t.kind != Tok::Newline && t.kind != Tok::End)
      fail(t, "unexpected '" + describe(t) + "' after statement");
  }

  static double parse_probability(const Token& t) {
    double value = 0.0;
    const char* first = t.text.data();
    const char* last = first + t.text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value))
      fail(t, "'" + t.text + "' is not a decimal probability");
    return value;
  }

  std::size_t var_of(const Token& t) const {
    auto it = declared_.find(t.text);
    if (it == declared_.end()) fail(t, "undeclared variable '" + t.text + "'");
    return it->second;
  }

  BayesianNetwork assemble() {
    BayesianNetwork bn;
    for (auto& v : vars_) bn.add_variable(v.name, v.domain);

    std::set<std::size_t> has_cpt;
    for (const RawCpt& raw : cpts_) {
      std::size_t child = var_of(raw.child);
      if (!has_cpt.insert(child).second)
        fail(raw.child, "duplicate cpt for '" + raw.child.text + "'");
      std::vector<std::size_t> parents;
      std::set<std::size_t> seen_parents;
      for (const Token& p : raw.parents) {
        std::size_t pv = var_of(p);
        if (pv == child) fail(p, "variable '" + p.text + "' is its own parent");
        if (!seen_parents.insert(pv).second)
          fail(p, "parent '" + p.text + "' listed twice");
        parents.push_back(pv);
      }
      const auto& domain = vars_[child].domain;
      std::size_t card = domain.size();
      std::size_t rows = 1;
      for (std::size_t p : parents) rows *= vars_[p].domain.size();

      Cpt cpt{raw.child.text, {}, std::vector<double>(rows * card, std::nan(""))};
      for (std::size_t p : parents) cpt.parents.push_back(vars_[p].name);
      std::vector<bool> filled(rows, false);

      for (const RawRow& row : raw.rows) {
        if (row.parent_labels.size() != parents.size()) {
          const Token& at = row.parent_labels.empty() ? row.probs.front()
                                                      : row.parent_labels.front();
          fail(at, "row of '" + raw.child.text + "' needs " +
                       std::to_string(parents.size()) + " parent values, found " +
                       std::to_string(row.parent_labels.size()));
        }
        std::size_t r = 0;
        std::string combo;
        for (std::size_t i = 0; i < parents.size(); ++i) {
          const auto& pd = vars_[parents[i]].domain;
          const Token& lab = row.parent_labels[i];
          auto it = std::find(pd.begin(), pd.end(), lab.text);
          if (it == pd.end())
            fail(lab, "value '" + lab.text + "' is not in the domain of '" +
                          vars_[parents[i]].name + "'");
          r = r * pd.size() + static_cast<std::size_t>(it - pd.begin());
          combo += (i ? ", " : "") + lab.text;
        }
        if (filled[r])
          fail(row.probs.front(), "duplicate row (" + combo + ") for '" +
                                      raw.child.text + "'");
        if (row.probs.size() != card)
          fail(row.probs.front(), "row of '" + raw.child.text + "' has " +
                                      std::to_string(row.probs.size()) +
                                      " probabilities, domain has " +
                                      std::to_string(card));
        std::vector<double> probs;
        double sum = 0.0;
        for (const Token& t : row.probs) {
          double p = parse_probability(t);
          if (p < 0.0 || p > 1.0)
            throw ValidationError("line " + std::to_string(row.line) + ": cpt '" +
                                  raw.child.text + "' row (" + combo +
                                  "): probability " + t.text +
                                  " outside [0,1]");
          probs.push_back(p);
          sum += p;
        }
        if (std::abs(sum - 1.0) > kRowSumTolerance)
          throw ValidationError("line " + std::to_string(row.line) + ": cpt '" +
                                raw.child.text + "' row (" + combo +
                                "): probabilities sum to " + format_double(sum) +
                                ", expected 1");
        // Only rescale when the published figures were visibly rounded, so
        // that canonical output re-parses to the identical table.
        double scale = std::abs(sum - 1.0) > 1e-12 ? sum : 1.0;
        for (std::size_t k = 0; k < card; ++k)
          cpt.table[r * card + k] = probs[k] / scale;
        filled[r] = true;
      }
      for (std::size_t r = 0; r < rows; ++r) {
        if (filled[r]) continue;
        std::string combo;
        std::size_t rem = r;
        std::vector<std::string> labels(parents.size());
        for (std::size_t i = parents.size(); i-- > 0;) {
          const auto& pd = vars_[parents[i]].domain;
          labels[i] = pd[rem % pd.size()];
          rem /= pd.size();
        }
        for (std::size_t i = 0; i < labels.size(); ++i)
          combo += (i ? ", " : "") + labels[i];
        fail(raw.child, "cpt '" + raw.child.text + "' is missing row (" + combo + ")");
      }
      bn.add_cpt(std::move(cpt));
    }
    require_valid(bn);
    return bn;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<VariableSpec> vars_;
  std::map<std::string, std::size_t> declared_;
  std::vector<RawCpt> cpts_;
};

}  // namespace

BayesianNetwork parse_bn(std::string_view text) { return Parser(text).run(); }

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

BayesianNetwork load_bn_file(const std::filesystem::path& path) {
  try {
    return parse_bn(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string(), e);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

std::string serialize_bn(const BayesianNetwork& bn) {
  std::string out;
  for (const auto& v : bn.variables()) {
    out += "variable " + v.name + " {";
    for (std::size_t i = 0; i < v.domain.size(); ++i)
      out += (i ? ", " : " ") + v.domain[i];
    out += " }\n";
  }
  for (VarId v = 0; v < bn.size(); ++v) {
    if (!bn.has_cpt(v)) continue;
    out += "\ncpt " + bn.name(v);
    const auto& ps = bn.parents(v);
    for (std::size_t i = 0; i < ps.size(); ++i)
      out += (i ? ", " : " | ") + bn.name(ps[i]);
    out += " {\n";
    for (std::size_t r = 0; r < bn.row_count(v); ++r) {
      out += "  ";
      if (!ps.empty()) {
        auto vals = bn.row_values(v, r);
        for (std::size_t i = 0; i < ps.size(); ++i)
          out += (i ? ", " : "") + bn.variable(ps[i]).domain[vals[i]];
        out += " : ";
      }
      auto probs = bn.row(v, r);
      for (std::size_t k = 0; k < probs.size(); ++k)
        out += (k ? ", " : "") + format_double(probs[k]);
      out += "\n";
    }
    out += "}\n";
  }
  return out;
}

}  // namespace popnet
