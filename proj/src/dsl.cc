/// @file dsl.cc
/// Parser and serializer for `.resha` model documents.

#include "resha/dsl.h"

#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace resha {

namespace {

enum class TokenType { kWord, kString, kColon, kComma, kArrow };

struct Token {
  TokenType type;
  std::string text;
  int column;
};

struct Line {
  int number;
  std::vector<Token> tokens;
};

bool word_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
         c == '_' || c == '-' || c == '.';
}

class Lexer {
 public:
  Lexer(std::string_view text, std::string file) : text_(text), file_(std::move(file)) {}

  std::vector<Line> run() {
    std::vector<Line> lines;
    int number = 0;
    std::size_t pos = 0;
    while (pos <= text_.size()) {
      std::size_t end = text_.find('\n', pos);
      if (end == std::string_view::npos) end = text_.size();
      ++number;
      Line line{number, tokenize(text_.substr(pos, end - pos), number)};
      if (!line.tokens.empty()) lines.push_back(std::move(line));
      pos = end + 1;
    }
    return lines;
  }

 private:
  SourceSpan span(int line, int column) const { return {file_, line, column}; }

  std::vector<Token> tokenize(std::string_view s, int line) {
    std::vector<Token> out;
    std::size_t i = 0;
    if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
    while (i < s.size()) {
      char c = s[i];
      int column = static_cast<int>(i) + 1;
      if (c == ' ' || c == '\t') {
        ++i;
      } else if (c == '#') {
        break;
      } else if (c == ':') {
        out.push_back({TokenType::kColon, ":", column});
        ++i;
      } else if (c == ',') {
        out.push_back({TokenType::kComma, ",", column});
        ++i;
      } else if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
        out.push_back({TokenType::kArrow, "->", column});
        i += 2;
      } else if (c == '"') {
        out.push_back({TokenType::kString, read_string(s, i, line), column});
      } else if (word_char(c)) {
        std::size_t start = i;
        while (i < s.size() && word_char(s[i]) &&
               !(s[i] == '-' && i + 1 < s.size() && s[i + 1] == '>'))
          ++i;
        out.push_back({TokenType::kWord, std::string(s.substr(start, i - start)), column});
      } else {
        throw ParseError(std::string("unexpected character '") + c + "'", span(line, column));
      }
    }
    return out;
  }

  std::string read_string(std::string_view s, std::size_t& i, int line) {
    int column = static_cast<int>(i) + 1;
    std::string out;
    ++i;
    while (i < s.size()) {
      char c = s[i++];
      if (c == '"') return out;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (i >= s.size()) break;
      char e = s[i++];
      switch (e) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        default:
          throw ParseError(std::string("unknown escape '\\") + e + "'",
                           span(line, static_cast<int>(i) - 1));
      }
    }
    throw ParseError("unterminated string", span(line, column));
  }

  std::string_view text_;
  std::string file_;
};

/// Cursor over the tokens of one line.
class LineReader {
 public:
  LineReader(const Line& line, const std::string& file) : line_(line), file_(file) {}

  bool done() const { return pos_ >= line_.tokens.size(); }

  SourceSpan span_here() const {
    if (done()) {
      int col = line_.tokens.empty() ? 1
                                     : line_.tokens.back().column +
                                           static_cast<int>(line_.tokens.back().text.size());
      return {file_, line_.number, col};
    }
    return {file_, line_.number, line_.tokens[pos_].column};
  }

  SourceSpan span_at(std::size_t index) const {
    return {file_, line_.number, line_.tokens[index].column};
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, span_here()); }

  const Token& peek() const {
    if (done()) fail("unexpected end of line");
    return line_.tokens[pos_];
  }

  bool peek_word(std::string_view w) const {
    return !done() && line_.tokens[pos_].type == TokenType::kWord && line_.tokens[pos_].text == w;
  }

  std::string word(std::string_view what) {
    const Token& t = peek();
    if (t.type != TokenType::kWord) fail("expected " + std::string(what));
    ++pos_;
    return t.text;
  }

  std::string identifier(std::string_view what) {
    SourceSpan where = span_here();
    std::string id = word(what);
    if (!is_identifier(id)) throw ParseError("invalid " + std::string(what) + " '" + id + "'", where);
    return id;
  }

  std::string string(std::string_view what) {
    const Token& t = peek();
    if (t.type != TokenType::kString) fail("expected quoted " + std::string(what));
    ++pos_;
    return t.text;
  }

  void expect(TokenType type, std::string_view text) {
    const Token& t = peek();
    if (t.type != type) fail("expected '" + std::string(text) + "'");
    ++pos_;
  }

  /// `key:` prefix. Returns false (consuming nothing) if the next word differs.
  bool key(std::string_view name) {
    if (!peek_word(name)) return false;
    ++pos_;
    expect(TokenType::kColon, ":");
    return true;
  }

  /// Comma-separated identifier list (at least one item).
  std::vector<std::string> id_list(std::string_view what) {
    std::vector<std::string> out{identifier(what)};
    while (!done() && peek().type == TokenType::kComma) {
      ++pos_;
      out.push_back(identifier(what));
    }
    return out;
  }

  void end_of_line() const {
    if (!done()) fail("unexpected '" + line_.tokens[pos_].text + "'");
  }

  std::size_t position() const { return pos_; }

 private:
  const Line& line_;
  const std::string& file_;
  std::size_t pos_ = 0;
};

template <class E, class F>
E enum_value(LineReader& r, std::string_view what, F parse) {
  SourceSpan where = r.span_here();
  std::string text = r.word(what);
  auto value = parse(text);
  if (!value) throw ParseError("unknown " + std::string(what) + " '" + text + "'", where);
  return *value;
}

class Parser {
 public:
  Parser(std::string_view text, std::string file)
      : file_(std::move(file)), lines_(Lexer(text, file_).run()) {}

  SystemModel run() {
    bool have_system = false;
    bool have_top = false;
    while (pos_ < lines_.size()) {
      const Line& line = lines_[pos_];
      LineReader r(line, file_);
      SourceSpan start = r.span_here();
      std::string keyword = r.word("statement");
      if (keyword == "system") {
        if (have_system) throw ParseError("duplicate 'system' statement", start);
        model_.name = r.string("system name");
        have_system = true;
        r.end_of_line();
        ++pos_;
      } else if (keyword == "top_event") {
        if (have_top) throw ParseError("duplicate 'top_event' statement", start);
        model_.top_event = r.string("top event");
        have_top = true;
        r.end_of_line();
        ++pos_;
      } else if (keyword == "loss") {
        parse_loss(r, start);
      } else if (keyword == "hazard") {
        parse_hazard(r, start);
      } else if (keyword == "design_class") {
        parse_design_class(r, start);
      } else if (keyword == "redundancy_group") {
        parse_group(r, start);
      } else if (keyword == "shared_resource") {
        parse_resource(r, start);
      } else if (keyword == "division") {
        parse_division(r, start);
      } else if (keyword == "component") {
        ++pos_;
        Component c = parse_component(r, start);
        unique(shared_ids_, c.id, "component", start);
        model_.shared_components.push_back(std::move(c));
      } else {
        throw ParseError("unknown statement '" + keyword + "'", start);
      }
    }
    if (!have_system) throw ParseError("missing 'system' statement", {file_, 1, 1});
    if (!have_top) throw ParseError("missing 'top_event' statement", {file_, 1, 1});
    return std::move(model_);
  }

 private:
  void unique(std::set<std::string>& seen, const std::string& id, std::string_view what,
              const SourceSpan& span) {
    if (!seen.insert(id).second)
      throw ParseError("duplicate " + std::string(what) + " id '" + id + "'", span);
  }

  void parse_loss(LineReader& r, const SourceSpan& start) {
    SourceSpan id_span = r.span_here();
    Loss loss{r.identifier("loss id"), r.string("loss description"), start};
    unique(loss_ids_, loss.id, "loss", id_span);
    r.end_of_line();
    model_.losses.push_back(std::move(loss));
    ++pos_;
  }

  void parse_hazard(LineReader& r, const SourceSpan& start) {
    SourceSpan id_span = r.span_here();
    Hazard h;
    h.span = start;
    h.id = r.identifier("hazard id");
    unique(hazard_ids_, h.id, "hazard", id_span);
    h.description = r.string("hazard description");
    if (!r.key("losses")) r.fail("expected 'losses:'");
    h.linked_losses = r.id_list("loss id");
    r.end_of_line();
    model_.hazards.push_back(std::move(h));
    ++pos_;
  }

  void parse_design_class(LineReader& r, const SourceSpan& start) {
    SourceSpan id_span = r.span_here();
    DesignClass dc;
    dc.span = start;
    dc.id = r.identifier("design class id");
    unique(class_ids_, dc.id, "design class", id_span);
    dc.description = r.string("design class description");
    if (r.key("diversity")) dc.diversity_tag = r.identifier("diversity tag");
    r.end_of_line();
    model_.design_classes.push_back(std::move(dc));
    ++pos_;
  }

  void parse_group(LineReader& r, const SourceSpan& start) {
    SourceSpan id_span = r.span_here();
    RedundancyGroup g;
    g.span = start;
    g.id = r.identifier("redundancy group id");
    unique(group_ids_, g.id, "redundancy group", id_span);
    bool level = false, logic = false, members = false;
    while (!r.done()) {
      if (r.key("level")) {
        g.level = enum_value<RedundancyLevel>(r, "redundancy level", parse_redundancy_level);
        level = true;
      } else if (r.key("logic")) {
        g.logic = enum_value<GroupLogic>(r, "group logic", parse_group_logic);
        logic = true;
      } else if (r.key("members")) {
        g.members = r.id_list("member id");
        members = true;
      } else {
        r.fail("unknown key '" + r.peek().text + "' in redundancy_group");
      }
    }
    if (!level) r.fail("redundancy_group missing 'level:'");
    if (!logic) r.fail("redundancy_group missing 'logic:'");
    if (!members) r.fail("redundancy_group missing 'members:'");
    model_.redundancy_groups.push_back(std::move(g));
    ++pos_;
  }

  void parse_resource(LineReader& r, const SourceSpan& start) {
    SourceSpan id_span = r.span_here();
    SharedResource res;
    res.span = start;
    res.id = r.identifier("shared resource id");
    unique(resource_ids_, res.id, "shared resource", id_span);
    bool scope = false, dependents = false;
    while (!r.done()) {
      if (r.key("scope")) {
        res.scope = enum_value<ResourceScope>(r, "resource scope", parse_resource_scope);
        scope = true;
      } else if (r.key("dependents")) {
        res.dependents = r.id_list("component id");
        dependents = true;
      } else {
        r.fail("unknown key '" + r.peek().text + "' in shared_resource");
      }
    }
    if (!scope) r.fail("shared_resource missing 'scope:'");
    if (!dependents) r.fail("shared_resource missing 'dependents:'");
    model_.shared_resources.push_back(std::move(res));
    ++pos_;
  }

  void parse_division(LineReader& r, const SourceSpan& start) {
    SourceSpan id_span = r.span_here();
    Division d;
    d.span = start;
    d.id = r.identifier("division id");
    unique(division_ids_, d.id, "division", id_span);
    if (r.peek_word("replicates")) {
      r.word("replicates");
      d.replicates = r.identifier("division id");
    }
    r.end_of_line();
    ++pos_;
    std::set<std::string> local;
    while (true) {
      if (pos_ >= lines_.size()) throw ParseError("division '" + d.id + "' missing 'end'", start);
      LineReader inner(lines_[pos_], file_);
      SourceSpan at = inner.span_here();
      std::string keyword = inner.word("'component' or 'end'");
      if (keyword == "end") {
        inner.end_of_line();
        ++pos_;
        break;
      }
      if (keyword != "component")
        throw ParseError("unknown statement '" + keyword + "' in division", at);
      ++pos_;
      Component c = parse_component(inner, at);
      unique(local, c.id, "component", at);
      d.components.push_back(std::move(c));
    }
    model_.divisions.push_back(std::move(d));
  }

  /// `r` is positioned after the `component` keyword; pos_ is the next line.
  Component parse_component(LineReader& r, const SourceSpan& start) {
    Component c;
    c.span = start;
    c.id = r.identifier("component id");
    r.end_of_line();
    bool kind = false, tech = false, design = false;
    std::set<std::string> link_ids;
    while (true) {
      if (pos_ >= lines_.size()) throw ParseError("component '" + c.id + "' missing 'end'", start);
      LineReader in(lines_[pos_], file_);
      SourceSpan at = in.span_here();
      if (in.peek_word("end")) {
        in.word("end");
        in.end_of_line();
        ++pos_;
        break;
      }
      if (in.peek_word("control_action") || in.peek_word("info_flow")) {
        bool ca = in.word("link kind") == "control_action";
        ++pos_;
        Link link = parse_link(in, at, ca ? LinkKind::kControlAction : LinkKind::kInformationFlow);
        unique(link_ids, link.id, "link", at);
        c.links.push_back(std::move(link));
        continue;
      }
      auto once = [&](bool& flag, std::string_view key) {
        if (flag) throw ParseError("duplicate '" + std::string(key) + ":' in component", at);
        flag = true;
      };
      if (in.key("kind")) {
        once(kind, "kind");
        c.kind = enum_value<ComponentKind>(in, "component kind", parse_component_kind);
      } else if (in.key("tech")) {
        once(tech, "tech");
        c.tech = enum_value<Tech>(in, "tech", parse_tech);
      } else if (in.key("design_class")) {
        once(design, "design_class");
        c.design_class = in.identifier("design class id");
      } else if (in.key("inputs")) {
        auto ids = in.id_list("input reference");
        c.inputs.insert(c.inputs.end(), ids.begin(), ids.end());
      } else if (in.key("feedback")) {
        auto ids = in.id_list("feedback reference");
        c.feedback_inputs.insert(c.feedback_inputs.end(), ids.begin(), ids.end());
      } else {
        in.fail("unknown key '" + in.peek().text + "' in component");
      }
      in.end_of_line();
      ++pos_;
    }
    if (!kind) throw ParseError("component '" + c.id + "' missing 'kind:'", start);
    if (!tech) throw ParseError("component '" + c.id + "' missing 'tech:'", start);
    if (!design) throw ParseError("component '" + c.id + "' missing 'design_class:'", start);
    return c;
  }

  Link parse_link(LineReader& r, const SourceSpan& start, LinkKind kind) {
    Link link;
    link.span = start;
    link.kind = kind;
    link.id = r.identifier("link id");
    if (r.peek_word("port")) {
      r.word("port");
      link.port = r.identifier("port name");
    }
    r.expect(TokenType::kArrow, "->");
    link.targets = r.id_list("target component id");
    r.end_of_line();
    while (true) {
      if (pos_ >= lines_.size()) throw ParseError("link '" + link.id + "' missing 'end'", start);
      LineReader in(lines_[pos_], file_);
      SourceSpan at = in.span_here();
      if (in.peek_word("end")) {
        in.word("end");
        in.end_of_line();
        ++pos_;
        break;
      }
      if (!in.key("applicable")) in.fail("unknown key '" + in.peek().text + "' in link");
      Applicability a;
      a.span = at;
      a.mode = enum_value<FailureMode>(in, "failure mode type", parse_failure_mode);
      if (in.key("hazards")) a.hazards = in.id_list("hazard id");
      in.end_of_line();
      link.applicability.push_back(std::move(a));
      ++pos_;
    }
    return link;
  }

  std::string file_;
  std::vector<Line> lines_;
  std::size_t pos_ = 0;
  SystemModel model_;
  std::set<std::string> loss_ids_, hazard_ids_, class_ids_, group_ids_, resource_ids_,
      division_ids_, shared_ids_;
};

// ---------------------------------------------------------------------------
// Serialization

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

std::string join(const std::vector<std::string>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? ", " : "") + ids[i];
  return out;
}

void write_component(std::ostream& os, const Component& c, const std::string& indent) {
  const std::string in = indent + "  ";
  os << indent << "component " << c.id << "\n";
  os << in << "kind: " << to_string(c.kind) << "\n";
  os << in << "tech: " << to_string(c.tech) << "\n";
  os << in << "design_class: " << c.design_class << "\n";
  if (!c.inputs.empty()) os << in << "inputs: " << join(c.inputs) << "\n";
  if (!c.feedback_inputs.empty()) os << in << "feedback: " << join(c.feedback_inputs) << "\n";
  for (const Link& l : c.links) {
    os << in << to_string(l.kind) << " " << l.id;
    if (l.port != "out") os << " port " << l.port;
    os << " -> " << join(l.targets) << "\n";
    for (const Applicability& a : l.applicability) {
      os << in << "  applicable: " << to_char(a.mode);
      if (!a.hazards.empty()) os << " hazards: " << join(a.hazards);
      os << "\n";
    }
    os << in << "end\n";
  }
  os << indent << "end\n";
}

}  // namespace

SystemModel parse_model(std::string_view text, std::string_view file_name) {
  return Parser(text, std::string(file_name)).run();
}

SystemModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read model file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_model(buffer.str(), path);
}

std::string serialize_model(const SystemModel& model) {
  std::ostringstream os;
  os << "system " << quote(model.name) << "\n";
  os << "top_event " << quote(model.top_event) << "\n";
  if (!model.losses.empty()) os << "\n";
  for (const Loss& l : model.losses) os << "loss " << l.id << " " << quote(l.description) << "\n";
  if (!model.hazards.empty()) os << "\n";
  for (const Hazard& h : model.hazards)
    os << "hazard " << h.id << " " << quote(h.description) << " losses: " << join(h.linked_losses)
       << "\n";
  if (!model.design_classes.empty()) os << "\n";
  for (const DesignClass& dc : model.design_classes) {
    os << "design_class " << dc.id << " " << quote(dc.description);
    if (!dc.diversity_tag.empty()) os << " diversity: " << dc.diversity_tag;
    os << "\n";
  }
  for (const Division& d : model.divisions) {
    os << "\ndivision " << d.id;
    if (d.replicates) os << " replicates " << *d.replicates;
    os << "\n";
    for (const Component& c : d.components) write_component(os, c, "  ");
    os << "end\n";
  }
  for (const Component& c : model.shared_components) {
    os << "\n";
    write_component(os, c, "");
  }
  if (!model.redundancy_groups.empty()) os << "\n";
  for (const RedundancyGroup& g : model.redundancy_groups)
    os << "redundancy_group " << g.id << " level: " << to_string(g.level)
       << " logic: " << to_string(g.logic) << " members: " << join(g.members) << "\n";
  if (!model.shared_resources.empty()) os << "\n";
  for (const SharedResource& r : model.shared_resources)
    os << "shared_resource " << r.id << " scope: " << to_string(r.scope)
       << " dependents: " << join(r.dependents) << "\n";
  return os.str();
}

}  // namespace resha
