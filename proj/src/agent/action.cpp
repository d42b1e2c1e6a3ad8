#include "hypoforge/agent/action.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "hypoforge/error.hpp"

namespace hypoforge::agent {

using nlohmann::json;

std::string_view to_string(Module m) {
  switch (m) {
    case Module::kGeneration: return "generation";
    case Module::kEvaluation: return "evaluation";
    case Module::kExtractor: return "extractor";
    case Module::kJudge: return "judge";
  }
  return "";
}

namespace {

[[noreturn]] void parse_fail(const std::string& msg) { throw Error(ErrorCode::kParse, msg); }

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Recursive-descent reader for the Python call subset agents emit.
class CallParser {
 public:
  explicit CallParser(std::string_view src) : src_(src) {}

  ApiCall parse() {
    skip_ws();
    std::string name = identifier();
    skip_ws();
    // Tolerate "result = fn(...)".
    if (peek() == '=' && peek(1) != '=') {
      ++pos_;
      skip_ws();
      name = identifier();
      skip_ws();
    }
    if (peek() != '(') parse_fail("expected '(' after function name '" + name + "'");
    ApiCall call;
    call.function = name;
    parse_arguments(call.positional, call.keywords);
    skip_ws();
    if (peek() == ';') ++pos_;
    skip_ws();
    if (pos_ != src_.size()) parse_fail("unexpected trailing input after the function call");
    return call;
  }

 private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void skip_ws() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) parse_fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string identifier() {
    if (!ident_start(peek())) parse_fail("expected an identifier");
    const auto start = pos_;
    while (ident_char(peek())) ++pos_;
    return std::string(src_.substr(start, pos_ - start));
  }

  // Consumes "(args)" starting at '('.
  void parse_arguments(json& positional, json& keywords) {
    expect('(');
    skip_ws();
    if (peek() == ')') {
      ++pos_;
      return;
    }
    while (true) {
      skip_ws();
      const auto save = pos_;
      bool is_keyword = false;
      if (ident_start(peek())) {
        std::string key = identifier();
        skip_ws();
        if (peek() == '=' && peek(1) != '=') {
          ++pos_;
          if (keywords.contains(key)) parse_fail("duplicate keyword argument '" + key + "'");
          keywords[key] = value();
          is_keyword = true;
        } else {
          pos_ = save;
        }
      }
      if (!is_keyword) {
        if (!keywords.empty()) parse_fail("positional argument after keyword argument");
        positional.push_back(value());
      }
      skip_ws();
      if (peek() == ',') {
        ++pos_;
        skip_ws();
        if (peek() == ')') {
          ++pos_;
          return;
        }
        continue;
      }
      if (peek() == ')') {
        ++pos_;
        return;
      }
      parse_fail("expected ',' or ')' in argument list");
    }
  }

  json sequence(char close) {
    json items = json::array();
    skip_ws();
    if (peek() == close) {
      ++pos_;
      return items;
    }
    while (true) {
      items.push_back(value());
      skip_ws();
      if (peek() == ',') {
        ++pos_;
        skip_ws();
        if (peek() == close) {
          ++pos_;
          return items;
        }
        continue;
      }
      if (peek() == close) {
        ++pos_;
        return items;
      }
      parse_fail(std::string("expected ',' or '") + close + "'");
    }
  }

  json string_literal() {
    const char quote = peek();
    ++pos_;
    std::string out;
    while (true) {
      if (pos_ >= src_.size()) parse_fail("unterminated string literal");
      char c = src_[pos_++];
      if (c == quote) break;
      if (c == '\\') {
        if (pos_ >= src_.size()) parse_fail("unterminated string literal");
        char e = src_[pos_++];
        switch (e) {
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          case 'r': out.push_back('\r'); break;
          case '\\': out.push_back('\\'); break;
          case '\'': out.push_back('\''); break;
          case '"': out.push_back('"'); break;
          default:
            out.push_back('\\');
            out.push_back(e);
        }
        continue;
      }
      out.push_back(c);
    }
    return out;
  }

  json number() {
    const auto start = pos_;
    if (peek() == '-' || peek() == '+') ++pos_;
    bool is_float = false;
    while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.' || peek() == 'e' ||
           peek() == 'E' || ((peek() == '-' || peek() == '+') &&
                             (src_[pos_ - 1] == 'e' || src_[pos_ - 1] == 'E'))) {
      if (!std::isdigit(static_cast<unsigned char>(peek()))) is_float = true;
      ++pos_;
    }
    const std::string text(src_.substr(start, pos_ - start));
    if (!is_float) {
      std::int64_t v = 0;
      const char* b = text.data() + (text.front() == '+' ? 1 : 0);
      auto [p, ec] = std::from_chars(b, text.data() + text.size(), v);
      if (ec == std::errc{} && p == text.data() + text.size()) return v;
    }
    try {
      std::size_t used = 0;
      double d = std::stod(text, &used);
      if (used == text.size()) return d;
    } catch (const std::exception&) {
    }
    parse_fail("malformed number '" + text + "'");
  }

  json value() {
    skip_ws();
    const char c = peek();
    if (c == '"' || c == '\'') return string_literal();
    if (c == '[') {
      ++pos_;
      return sequence(']');
    }
    if (c == '(') {
      ++pos_;
      return sequence(')');
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') {
      return number();
    }
    if (!ident_start(c)) parse_fail(std::string("unexpected character '") + c + "'");
    std::string name = identifier();
    while (peek() == '.' && ident_start(peek(1))) {
      ++pos_;
      name += "." + identifier();
    }
    if (name == "True") return true;
    if (name == "False") return false;
    if (name == "None") return nullptr;
    skip_ws();
    if (peek() == '(') {
      json args = json::array();
      json kwargs = json::object();
      parse_arguments(args, kwargs);
      return json{{"$call", name}, {"args", std::move(args)}, {"kwargs", std::move(kwargs)}};
    }
    return json{{"$name", name}};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

const json* find_key(const json& j, const char* key) {
  if (auto it = j.find(key); it != j.end()) return &*it;
  const std::string wanted = lower(key);
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (lower(it.key()) == wanted) return &*it;
  }
  return nullptr;
}

std::string text_value(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

ApiCall parse_function_call(std::string_view source) { return CallParser(source).parse(); }

std::string canonical_call(const ApiCall& call) {
  return call.function + "(" + call.keywords.dump() + ")";
}

std::vector<FencedBlock> fenced_blocks(std::string_view text) {
  std::vector<FencedBlock> out;
  std::size_t pos = 0;
  while (true) {
    const auto open = text.find("```", pos);
    if (open == std::string_view::npos) break;
    const auto eol = text.find('\n', open + 3);
    if (eol == std::string_view::npos) break;
    const auto close = text.find("```", eol + 1);
    if (close == std::string_view::npos) break;
    out.push_back({lower(trim(text.substr(open + 3, eol - open - 3))),
                   std::string(text.substr(eol + 1, close - eol - 1)), open});
    pos = close + 3;
  }
  return out;
}

Propose parse_proposal_json(const json& j) {
  if (!j.is_object()) parse_fail("proposal must be a JSON object");
  const json* rel = find_key(j, "Relation");
  const json* desc = find_key(j, "Hypothesis Description");
  if (!rel || !desc) parse_fail("proposal JSON needs \"Relation\" and \"Hypothesis Description\"");
  std::string rel_text = trim(text_value(*rel));
  while (!rel_text.empty() && (rel_text.back() == '\'' || rel_text.back() == '"')) rel_text.pop_back();
  while (!rel_text.empty() && (rel_text.front() == '\'' || rel_text.front() == '"')) {
    rel_text.erase(rel_text.begin());
  }
  auto relation = kb::parse_relation(rel_text);
  if (!relation) throw Error(ErrorCode::kValidation, "unknown relation '" + rel_text + "'");
  if (*relation == kb::RelationType::kAssociate) {
    throw Error(ErrorCode::kValidation, "relation 'associate' may not be proposed");
  }
  return Propose{*relation, text_value(*desc)};
}

Assess parse_assessment_json(const json& j) {
  if (!j.is_object()) parse_fail("assessment must be a JSON object");
  const json* is_new = find_key(j, "Is New");
  const json* feedback = find_key(j, "Feedback");
  const json* score = find_key(j, "Evaluation Score");
  if (!is_new || !feedback || !score) {
    parse_fail("assessment JSON needs \"Is New\", \"Feedback\" and \"Evaluation Score\"");
  }
  Assess a;
  if (is_new->is_boolean()) {
    a.is_new = is_new->get<bool>();
  } else {
    const auto v = lower(trim(text_value(*is_new)));
    if (v == "true" || v == "yes") {
      a.is_new = true;
    } else if (v == "false" || v == "no") {
      a.is_new = false;
    } else {
      throw Error(ErrorCode::kValidation, "\"Is New\" must be True or False");
    }
  }
  a.feedback = text_value(*feedback);
  if (score->is_number()) {
    a.score = score->get<double>();
  } else {
    const auto text = trim(text_value(*score));
    try {
      std::size_t used = 0;
      a.score = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error(ErrorCode::kValidation, "\"Evaluation Score\" must be numeric");
    }
  }
  if (!(a.score >= 0.0 && a.score <= 100.0)) {
    throw Error(ErrorCode::kValidation, "\"Evaluation Score\" must be within 0..100");
  }
  return a;
}

ParsedTurn parse_turn(std::string_view text, Module expected) {
  const auto blocks = fenced_blocks(text);
  const FencedBlock* chosen = nullptr;
  for (const auto& b : blocks) {
    if (b.label == "python" || b.label == "json") chosen = &b;
  }
  if (!chosen) parse_fail("no ```python or ```json block found");
  ParsedTurn turn;
  turn.thought = trim(text.substr(0, chosen->begin));
  turn.action_text = trim(chosen->body);
  if (chosen->label == "python") {
    turn.action = parse_function_call(chosen->body);
    return turn;
  }
  json j = json::parse(chosen->body, nullptr, false);
  if (j.is_discarded()) parse_fail("json block is not valid JSON");
  if (expected == Module::kEvaluation) {
    turn.action = parse_assessment_json(j);
  } else {
    turn.action = parse_proposal_json(j);
  }
  return turn;
}

Action parse_action(std::string_view text, Module expected) {
  return parse_turn(text, expected).action;
}

json to_json(const Propose& p) {
  return {{"Relation", kb::to_string(p.relation)}, {"Hypothesis Description", p.description}};
}

json to_json(const Assess& a) {
  return {{"Is New", a.is_new ? "True" : "False"},
          {"Feedback", a.feedback},
          {"Evaluation Score", a.score}};
}

std::string proposal_text(const Propose& p) {
  return "{\"Relation\": " + json(std::string(kb::to_string(p.relation))).dump() +
         ", \"Hypothesis Description\": " + json(p.description).dump() + "}";
}

std::string format_number(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 1e15) {
    return std::to_string(static_cast<long long>(v));
  }
  return json(v).dump();
}

std::string assessment_text(const Assess& a) {
  return std::string("{\"Is New\": \"") + (a.is_new ? "True" : "False") +
         "\", \"Feedback\": " + json(a.feedback).dump() + ", \"Evaluation Score\": \"" +
         format_number(a.score) + "\"}";
}

}  // namespace hypoforge::agent
