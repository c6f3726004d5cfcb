#include "lexsat/instance.hpp"

#include <cctype>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "lexsat/errors.hpp"

namespace lexsat {

namespace {

struct Token {
  std::string text;
  int line;
  int column;
};

std::vector<std::vector<Token>> tokenize(std::string_view text) {
  std::vector<std::vector<Token>> lines;
  int line_no = 1;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      std::size_t start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i > start) {
        tokens.push_back({std::string(line.substr(start, i - start)), line_no,
                          static_cast<int>(start) + 1});
      }
    }
    if (!tokens.empty()) lines.push_back(std::move(tokens));
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
    ++line_no;
  }
  return lines;
}

bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

int parse_int(const Token& t) {
  try {
    std::size_t used = 0;
    int value = std::stoi(t.text, &used);
    if (used != t.text.size()) throw std::invalid_argument("");
    return value;
  } catch (const std::exception&) {
    throw ParseError("expected an integer, got '" + t.text + "'", t.line, t.column);
  }
}

}  // namespace

Instance parse_instance(std::string_view text) {
  std::vector<Relation> relations;
  std::unordered_map<std::string, int> relation_index;
  std::optional<VarOrder> vars;
  int vars_line = 0;
  std::vector<Clause> clauses;

  for (const auto& tokens : tokenize(text)) {
    const Token& head = tokens.front();
    if (head.text == "relation") {
      if (tokens.size() < 3) {
        throw ParseError("relation needs a name and an arity", head.line, head.column);
      }
      const Token& name = tokens[1];
      if (!is_identifier(name.text)) {
        throw ParseError("invalid relation name '" + name.text + "'", name.line,
                         name.column);
      }
      if (relation_index.count(name.text)) {
        throw ParseError("duplicate relation '" + name.text + "'", name.line,
                         name.column);
      }
      int arity = parse_int(tokens[2]);
      if (arity < 1 || arity > kMaxArity) {
        throw ParseError("arity must be in [1, " + std::to_string(kMaxArity) + "]",
                         tokens[2].line, tokens[2].column);
      }
      std::vector<Tuple> tuples;
      for (std::size_t i = 3; i < tokens.size(); ++i) {
        const Token& tok = tokens[i];
        if (static_cast<int>(tok.text.size()) != arity) {
          throw ParseError("tuple '" + tok.text + "' does not have length " +
                               std::to_string(arity),
                           tok.line, tok.column);
        }
        Tuple t = 0;
        for (char c : tok.text) {
          if (c != '0' && c != '1') {
            throw ParseError("tuple '" + tok.text + "' must consist of 0/1",
                             tok.line, tok.column);
          }
          t = (t << 1) | Tuple(c == '1');
        }
        tuples.push_back(t);
      }
      relation_index.emplace(name.text, static_cast<int>(relations.size()));
      relations.emplace_back(name.text, arity, std::move(tuples));
    } else if (head.text == "vars") {
      if (vars) {
        throw ParseError("duplicate vars line (first at line " +
                             std::to_string(vars_line) + ")",
                         head.line, head.column);
      }
      std::vector<std::string> names;
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        const Token& tok = tokens[i];
        if (!is_identifier(tok.text)) {
          throw ParseError("invalid variable name '" + tok.text + "'", tok.line,
                           tok.column);
        }
        for (const std::string& seen : names) {
          if (seen == tok.text) {
            throw ParseError("duplicate variable '" + tok.text + "'", tok.line,
                             tok.column);
          }
        }
        names.push_back(tok.text);
      }
      vars = VarOrder(std::move(names));
      vars_line = head.line;
    } else if (head.text == "clause") {
      if (!vars) {
        throw ParseError("clause before the vars line", head.line, head.column);
      }
      if (tokens.size() < 2) {
        throw ParseError("clause needs a relation name", head.line, head.column);
      }
      const Token& name = tokens[1];
      auto it = relation_index.find(name.text);
      if (it == relation_index.end()) {
        throw ParseError("unknown relation '" + name.text + "'", name.line,
                         name.column);
      }
      const Relation& r = relations[it->second];
      if (static_cast<int>(tokens.size()) - 2 != r.arity()) {
        throw ParseError("relation '" + name.text + "' expects " +
                             std::to_string(r.arity()) + " arguments, got " +
                             std::to_string(tokens.size() - 2),
                         name.line, name.column);
      }
      Clause c;
      c.relation_index = it->second;
      for (std::size_t i = 2; i < tokens.size(); ++i) {
        const Token& tok = tokens[i];
        if (tok.text == "0" || tok.text == "1") {
          c.args.push_back(Arg::constant(tok.text == "1"));
        } else {
          int pos = vars->position(tok.text);
          if (pos < 0) {
            throw ParseError("undeclared variable '" + tok.text + "'", tok.line,
                             tok.column);
          }
          c.args.push_back(Arg::variable(pos));
        }
      }
      clauses.push_back(std::move(c));
    } else {
      throw ParseError("unknown directive '" + head.text + "'", head.line,
                       head.column);
    }
  }

  if (relations.empty()) throw ParseError("no relations declared", 1, 1);
  if (!vars) throw ParseError("missing vars line", 1, 1);
  auto set = std::make_shared<const RelationSet>(std::move(relations));
  Formula formula(set, std::move(*vars), std::move(clauses));
  return Instance{std::move(set), std::move(formula)};
}

std::string serialize_instance(const RelationSet& relations, const Formula& formula,
                               const std::vector<std::string>& comments) {
  std::ostringstream out;
  for (const std::string& c : comments) out << "# " << c << "\n";
  for (const Relation& r : relations.relations()) {
    out << "relation " << r.name() << " " << r.arity();
    for (Tuple t : r.tuples()) out << " " << r.tuple_string(t);
    out << "\n";
  }
  out << "vars";
  for (const std::string& name : formula.vars().names()) out << " " << name;
  out << "\n";
  for (const Clause& c : formula.clauses()) {
    out << "clause " << formula.clause_relation(c).name();
    for (const Arg& a : c.args) {
      if (a.is_const()) {
        out << " " << (a.const_bit() ? "1" : "0");
      } else {
        out << " " << formula.vars().name(a.var());
      }
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace lexsat
