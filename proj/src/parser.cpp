#include "tmkit/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace tmkit {

namespace {

constexpr int kMaxNesting = 200;

enum class Tok {
    Ident,
    String,
    LBrace,
    RBrace,
    Semi,
    Comma,
    Colon,
    Dot,
    Arrow,      // ->
    WavyArrow,  // ~>
    End,
};

struct Token {
    Tok kind = Tok::End;
    std::string text; // identifier or decoded string payload
    SourceSpan span;
};

const std::set<std::string>& reserved_words() {
    static const std::set<std::string> words{
        "thimac", "oo",   "shared",  "part",     "machine", "flow",
        "trigger", "event", "over",   "at",       "behavior", "create",
        "process", "release", "transfer", "receive",
    };
    return words;
}

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    // Tokenizes the whole input; stops at the first lexical error.
    bool run(std::vector<Token>& out, ParseError& err) {
        while (true) {
            skip_trivia();
            if (pos_ >= text_.size()) {
                out.push_back({Tok::End, "", here(0)});
                return true;
            }
            const char c = text_[pos_];
            if (is_ident_start(c)) {
                out.push_back(lex_ident());
            } else if (c == '"') {
                Token t;
                if (!lex_string(t, err)) return false;
                out.push_back(t);
            } else if (c == '{') {
                out.push_back(punct(Tok::LBrace, 1));
            } else if (c == '}') {
                out.push_back(punct(Tok::RBrace, 1));
            } else if (c == ';') {
                out.push_back(punct(Tok::Semi, 1));
            } else if (c == ',') {
                out.push_back(punct(Tok::Comma, 1));
            } else if (c == ':') {
                out.push_back(punct(Tok::Colon, 1));
            } else if (c == '.') {
                out.push_back(punct(Tok::Dot, 1));
            } else if (c == '-' && peek(1) == '>') {
                out.push_back(punct(Tok::Arrow, 2));
            } else if (c == '~' && peek(1) == '>') {
                out.push_back(punct(Tok::WavyArrow, 2));
            } else {
                err = {here(1), ErrorCode::LexError,
                       "unexpected character '" + printable(c) + "'"};
                return false;
            }
        }
    }

private:
    static bool is_ident_start(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
    }
    static bool is_ident_char(char c) {
        return is_ident_start(c) || (c >= '0' && c <= '9');
    }
    static std::string printable(char c) {
        if (static_cast<unsigned char>(c) >= 0x20 && static_cast<unsigned char>(c) < 0x7f)
            return std::string(1, c);
        std::ostringstream os;
        os << "\\x" << std::hex << (static_cast<unsigned>(c) & 0xff);
        return os.str();
    }

    char peek(size_t ahead) const {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }

    SourceSpan here(int length) const { return {line_, col_, length}; }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_trivia() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else {
                break;
            }
        }
    }

    Token punct(Tok kind, int length) {
        Token t{kind, "", here(length)};
        for (int i = 0; i < length; ++i) advance();
        return t;
    }

    Token lex_ident() {
        Token t;
        t.kind = Tok::Ident;
        t.span = here(0);
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) {
            t.text.push_back(text_[pos_]);
            advance();
        }
        t.span.length = static_cast<int>(t.text.size());
        return t;
    }

    bool lex_string(Token& t, ParseError& err) {
        t.kind = Tok::String;
        t.span = here(0);
        const SourceSpan open = here(1);
        advance(); // opening quote
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '"') {
                advance();
                t.span.length = col_ - t.span.column; // same-line strings only
                return true;
            }
            if (c == '\n') break;
            if (c == '\\') {
                const char esc = peek(1);
                if (esc == '"' || esc == '\\') {
                    t.text.push_back(esc);
                    advance();
                    advance();
                    continue;
                }
                err = {here(2), ErrorCode::LexError, "unsupported escape sequence"};
                return false;
            }
            t.text.push_back(c);
            advance();
        }
        err = {open, ErrorCode::LexError, "unterminated string"};
        return false;
    }

    const std::string& text_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

// ---------------------------------------------------------------------------
// Raw declarations with spans, before resolution.

struct ActRef {
    ActionKind kind = ActionKind::Create;
    std::string path;
    std::optional<std::string> label;
    SourceSpan span;
};

struct ActionDecl {
    ActionKind kind = ActionKind::Create;
    std::string label;
    SourceSpan span;
};

struct SharedDecl {
    std::string path;
    SourceSpan span;
};

struct EdgeDecl {
    ActRef src;
    ActRef dst;
    bool is_trigger = false;
    SourceSpan span;
};

struct ThimacDecl {
    std::string name;
    bool oo = false;
    SourceSpan span;
    std::vector<ActionDecl> machine;
    std::vector<SharedDecl> shared;
    std::vector<ThimacDecl> children;
};

struct EventDecl {
    std::string name;
    SourceSpan span;
    std::vector<ActRef> refs;
    std::string time_label;
};

struct BehaviorStmt {
    std::string from;
    std::optional<std::string> to; // nullopt: bare event declaration
    SourceSpan span;
};

struct BehaviorDecl {
    std::string name;
    SourceSpan span;
    std::vector<BehaviorStmt> stmts;
};

struct RawDocument {
    std::vector<ThimacDecl> thimacs;
    std::vector<EdgeDecl> edges; // flows and triggers, source order
    std::vector<EventDecl> events;
    std::vector<BehaviorDecl> behaviors;
};

class Parser {
public:
    Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    bool run(RawDocument& doc, ParseError& err) {
        while (!at(Tok::End)) {
            if (is_keyword("thimac")) {
                ThimacDecl t;
                if (!parse_thimac(t, 0, err)) return false;
                doc.thimacs.push_back(std::move(t));
            } else if (is_keyword("flow") || is_keyword("trigger")) {
                EdgeDecl e;
                if (!parse_edge(e, err)) return false;
                doc.edges.push_back(std::move(e));
            } else if (is_keyword("event")) {
                EventDecl e;
                if (!parse_event(e, err)) return false;
                doc.events.push_back(std::move(e));
            } else if (is_keyword("behavior")) {
                BehaviorDecl b;
                if (!parse_behavior(b, err)) return false;
                doc.behaviors.push_back(std::move(b));
            } else {
                err = {cur().span, ErrorCode::SyntaxError,
                       "expected 'thimac', 'flow', 'trigger', 'event' or 'behavior'"};
                return false;
            }
        }
        return true;
    }

private:
    const Token& cur() const { return toks_[idx_]; }
    bool at(Tok k) const { return cur().kind == k; }
    bool is_keyword(const char* w) const { return at(Tok::Ident) && cur().text == w; }
    void bump() {
        if (idx_ + 1 < toks_.size()) ++idx_;
    }

    bool expect(Tok k, const char* what, ParseError& err) {
        if (!at(k)) {
            err = {cur().span, ErrorCode::SyntaxError, std::string("expected ") + what};
            return false;
        }
        bump();
        return true;
    }

    bool parse_name(std::string& out, SourceSpan& span, ParseError& err) {
        if (!at(Tok::Ident)) {
            err = {cur().span, ErrorCode::SyntaxError, "expected a name"};
            return false;
        }
        if (reserved_words().count(cur().text)) {
            err = {cur().span, ErrorCode::SyntaxError,
                   "'" + cur().text + "' is a reserved word"};
            return false;
        }
        out = cur().text;
        span = cur().span;
        bump();
        return true;
    }

    bool parse_path(std::string& out, SourceSpan& span, ParseError& err) {
        std::string name;
        if (!parse_name(name, span, err)) return false;
        out = name;
        while (at(Tok::Dot)) {
            bump();
            SourceSpan s;
            if (!parse_name(name, s, err)) return false;
            out += "." + name;
            if (s.line == span.line) span.length = s.column + s.length - span.column;
        }
        return true;
    }

    bool parse_actref(ActRef& ref, ParseError& err) {
        if (!at(Tok::Ident)) {
            err = {cur().span, ErrorCode::SyntaxError, "expected an action kind"};
            return false;
        }
        auto kind = action_kind_from_string(cur().text);
        if (!kind) {
            err = {cur().span, ErrorCode::SyntaxError,
                   "expected one of create/process/release/transfer/receive, got '" +
                       cur().text + "'"};
            return false;
        }
        ref.kind = *kind;
        ref.span = cur().span;
        bump();
        if (!expect(Tok::Dot, "'.'", err)) return false;
        SourceSpan path_span;
        if (!parse_path(ref.path, path_span, err)) return false;
        if (path_span.line == ref.span.line)
            ref.span.length = path_span.column + path_span.length - ref.span.column;
        if (at(Tok::Colon)) {
            bump();
            std::string label;
            SourceSpan s;
            if (!parse_name(label, s, err)) return false;
            ref.label = label;
            if (s.line == ref.span.line) ref.span.length = s.column + s.length - ref.span.column;
        }
        return true;
    }

    bool parse_thimac(ThimacDecl& t, int depth, ParseError& err) {
        if (depth > kMaxNesting) {
            err = {cur().span, ErrorCode::SyntaxError, "thimac nesting too deep"};
            return false;
        }
        bump(); // 'thimac'
        if (!parse_name(t.name, t.span, err)) return false;
        if (is_keyword("oo")) {
            t.oo = true;
            bump();
        }
        if (!expect(Tok::LBrace, "'{'", err)) return false;
        while (!at(Tok::RBrace)) {
            if (is_keyword("thimac")) {
                ThimacDecl child;
                if (!parse_thimac(child, depth + 1, err)) return false;
                t.children.push_back(std::move(child));
            } else if (is_keyword("shared")) {
                bump();
                if (!is_keyword("part")) {
                    err = {cur().span, ErrorCode::SyntaxError, "expected 'part' after 'shared'"};
                    return false;
                }
                bump();
                SharedDecl s;
                if (!parse_path(s.path, s.span, err)) return false;
                if (!expect(Tok::Semi, "';'", err)) return false;
                t.shared.push_back(std::move(s));
            } else if (is_keyword("machine")) {
                bump();
                if (!expect(Tok::LBrace, "'{'", err)) return false;
                while (!at(Tok::RBrace)) {
                    if (!at(Tok::Ident)) {
                        err = {cur().span, ErrorCode::SyntaxError, "expected an action kind"};
                        return false;
                    }
                    auto kind = action_kind_from_string(cur().text);
                    if (!kind) {
                        err = {cur().span, ErrorCode::SyntaxError,
                               "unknown action kind '" + cur().text + "'"};
                        return false;
                    }
                    ActionDecl a;
                    a.kind = *kind;
                    a.span = cur().span;
                    bump();
                    if (at(Tok::Colon)) {
                        bump();
                        SourceSpan s;
                        if (!parse_name(a.label, s, err)) return false;
                    }
                    if (!expect(Tok::Semi, "';'", err)) return false;
                    t.machine.push_back(std::move(a));
                }
                bump(); // '}'
            } else if (is_keyword("flow") || is_keyword("trigger")) {
                EdgeDecl e;
                if (!parse_edge(e, err)) return false;
                pending_edges_.push_back(std::move(e));
            } else if (at(Tok::End)) {
                err = {cur().span, ErrorCode::SyntaxError, "unexpected end of input inside thimac"};
                return false;
            } else {
                err = {cur().span, ErrorCode::SyntaxError,
                       "expected 'thimac', 'shared', 'machine', 'flow', 'trigger' or '}'"};
                return false;
            }
        }
        bump(); // '}'
        return true;
    }

    bool parse_edge(EdgeDecl& e, ParseError& err) {
        e.is_trigger = cur().text == "trigger";
        e.span = cur().span;
        bump();
        if (!parse_actref(e.src, err)) return false;
        if (e.is_trigger) {
            if (!expect(Tok::WavyArrow, "'~>'", err)) return false;
        } else {
            if (!expect(Tok::Arrow, "'->'", err)) return false;
        }
        if (!parse_actref(e.dst, err)) return false;
        return expect(Tok::Semi, "';'", err);
    }

    bool parse_event(EventDecl& e, ParseError& err) {
        bump(); // 'event'
        if (!parse_name(e.name, e.span, err)) return false;
        if (!is_keyword("over")) {
            err = {cur().span, ErrorCode::SyntaxError, "expected 'over'"};
            return false;
        }
        bump();
        if (!expect(Tok::LBrace, "'{'", err)) return false;
        while (true) {
            ActRef ref;
            if (!parse_actref(ref, err)) return false;
            e.refs.push_back(std::move(ref));
            if (at(Tok::Comma)) {
                bump();
                continue;
            }
            break;
        }
        if (!expect(Tok::RBrace, "'}'", err)) return false;
        if (is_keyword("at")) {
            bump();
            if (!at(Tok::String)) {
                err = {cur().span, ErrorCode::SyntaxError, "expected a string after 'at'"};
                return false;
            }
            e.time_label = cur().text;
            bump();
        }
        return expect(Tok::Semi, "';'", err);
    }

    bool parse_behavior(BehaviorDecl& b, ParseError& err) {
        bump(); // 'behavior'
        if (!parse_name(b.name, b.span, err)) return false;
        if (!expect(Tok::LBrace, "'{'", err)) return false;
        while (!at(Tok::RBrace)) {
            BehaviorStmt s;
            if (!parse_name(s.from, s.span, err)) return false;
            if (at(Tok::Arrow)) {
                bump();
                std::string to;
                SourceSpan sp;
                if (!parse_name(to, sp, err)) return false;
                s.to = to;
            }
            if (!expect(Tok::Semi, "';'", err)) return false;
            b.stmts.push_back(std::move(s));
        }
        bump(); // '}'
        return true;
    }

public:
    std::vector<EdgeDecl> pending_edges_; // edges declared inside thimac blocks

private:
    std::vector<Token> toks_;
    size_t idx_ = 0;
};

// ---------------------------------------------------------------------------
// Resolution: raw declarations -> validated document.

struct Resolver {
    std::vector<ParseError> errors;

    std::vector<Thimac> thimacs;
    std::vector<Action> actions;
    std::vector<PartLink> shared_links;
    std::map<std::string, SourceSpan> thimac_spans;
    // (thimac id, kind) -> action ids, declaration order, for reference lookup
    std::map<std::pair<std::string, int>, std::vector<size_t>> by_owner_kind;
    std::map<std::string, size_t> action_index;

    void error(const SourceSpan& span, ErrorCode code, const std::string& msg) {
        errors.push_back({span, code, msg});
    }

    void register_thimac(const ThimacDecl& decl, const std::optional<std::string>& parent) {
        const std::string id = parent ? *parent + "." + decl.name : decl.name;
        if (thimac_spans.count(id)) {
            error(decl.span, ErrorCode::DuplicateId,
                  "duplicate thimac '" + id + "'");
            return;
        }
        thimac_spans[id] = decl.span;
        thimacs.push_back({id, decl.name, parent, decl.oo});
        for (const auto& a : decl.machine) {
            std::string action_id = std::string(to_string(a.kind)) + "." + id;
            if (!a.label.empty()) action_id += ":" + a.label;
            if (action_index.count(action_id)) {
                error(a.span, ErrorCode::DuplicateId,
                      "duplicate action '" + action_id + "' in machine of '" + id + "'");
                continue;
            }
            action_index[action_id] = actions.size();
            by_owner_kind[{id, static_cast<int>(a.kind)}].push_back(actions.size());
            actions.push_back({action_id, a.kind, id, a.label});
        }
        for (const auto& child : decl.children) register_thimac(child, id);
    }

    void resolve_shared(const ThimacDecl& decl, const std::optional<std::string>& parent) {
        const std::string id = parent ? *parent + "." + decl.name : decl.name;
        for (const auto& s : decl.shared) {
            if (!thimac_spans.count(s.path)) {
                error(s.span, ErrorCode::DanglingReference,
                      "shared part names unknown thimac '" + s.path + "'");
                continue;
            }
            shared_links.push_back({id, s.path, LinkKind::Shared});
        }
        for (const auto& child : decl.children) resolve_shared(child, id);
    }

    std::optional<std::string> resolve_ref(const ActRef& ref) {
        if (!thimac_spans.count(ref.path)) {
            error(ref.span, ErrorCode::DanglingReference,
                  "reference names unknown thimac '" + ref.path + "'");
            return std::nullopt;
        }
        const auto it = by_owner_kind.find({ref.path, static_cast<int>(ref.kind)});
        const std::vector<size_t> empty;
        const auto& candidates = it == by_owner_kind.end() ? empty : it->second;
        if (ref.label) {
            for (size_t i : candidates)
                if (actions[i].thing_label == *ref.label) return actions[i].id;
            error(ref.span, ErrorCode::DanglingReference,
                  "machine of '" + ref.path + "' has no " + to_string(ref.kind) +
                      " action labeled '" + *ref.label + "'");
            return std::nullopt;
        }
        if (candidates.empty()) {
            error(ref.span, ErrorCode::DanglingReference,
                  "machine of '" + ref.path + "' has no " + to_string(ref.kind) + " action");
            return std::nullopt;
        }
        if (candidates.size() > 1) {
            error(ref.span, ErrorCode::AmbiguousReference,
                  "machine of '" + ref.path + "' has " + std::to_string(candidates.size()) +
                      " " + to_string(ref.kind) + " actions; add the ':label'");
            return std::nullopt;
        }
        return actions[candidates.front()].id;
    }
};

} // namespace

ParseResult parse(const std::string& text) {
    std::vector<Token> tokens;
    ParseError lex_err;
    Lexer lexer(text);
    if (!lexer.run(tokens, lex_err)) return {std::nullopt, {lex_err}};

    Parser parser(std::move(tokens));
    RawDocument raw;
    ParseError parse_err;
    if (!parser.run(raw, parse_err)) return {std::nullopt, {parse_err}};
    // Edges declared inside thimac blocks join the top-level ones.
    for (auto& e : parser.pending_edges_) raw.edges.push_back(std::move(e));

    Resolver r;
    for (const auto& t : raw.thimacs) r.register_thimac(t, std::nullopt);
    for (const auto& t : raw.thimacs) r.resolve_shared(t, std::nullopt);

    std::vector<Flow> flows;
    std::vector<Trigger> triggers;
    std::set<std::pair<std::string, std::string>> seen_flows, seen_triggers;
    for (const auto& e : raw.edges) {
        auto src = r.resolve_ref(e.src);
        auto dst = r.resolve_ref(e.dst);
        if (!src || !dst) continue;
        const char* what = e.is_trigger ? "trigger" : "flow";
        if (*src == *dst) {
            r.error(e.span, ErrorCode::SelfFlow,
                    std::string(what) + " connects '" + *src + "' to itself");
            continue;
        }
        auto& seen = e.is_trigger ? seen_triggers : seen_flows;
        if (!seen.insert({*src, *dst}).second) {
            r.error(e.span, ErrorCode::DuplicateFlow,
                    "duplicate " + std::string(what) + " '" + *src +
                        (e.is_trigger ? "~>" : "->") + *dst + "'");
            continue;
        }
        if (e.is_trigger)
            triggers.push_back({*src, *dst});
        else
            flows.push_back({*src, *dst});
    }

    std::vector<Event> events;
    std::set<std::string> event_names;
    for (const auto& e : raw.events) {
        if (!event_names.insert(e.name).second) {
            r.error(e.span, ErrorCode::DuplicateId, "duplicate event '" + e.name + "'");
            continue;
        }
        Event ev;
        ev.id = e.name;
        ev.name = e.name;
        ev.time_label = e.time_label;
        for (const auto& ref : e.refs) {
            if (auto id = r.resolve_ref(ref)) ev.action_ids.insert(*id);
        }
        events.push_back(std::move(ev));
    }

    std::vector<BehavioralModel> behaviors;
    std::set<std::string> behavior_names;
    for (const auto& b : raw.behaviors) {
        if (!behavior_names.insert(b.name).second) {
            r.error(b.span, ErrorCode::DuplicateId, "duplicate behavior '" + b.name + "'");
            continue;
        }
        BehavioralModel bm;
        bm.id = b.name;
        std::set<std::pair<std::string, std::string>> seen_edges;
        auto mention = [&](const std::string& ev, const SourceSpan& span) -> bool {
            if (!event_names.count(ev)) {
                r.error(span, ErrorCode::DanglingReference,
                        "behavior '" + b.name + "' references unknown event '" + ev + "'");
                return false;
            }
            if (std::find(bm.event_ids.begin(), bm.event_ids.end(), ev) == bm.event_ids.end())
                bm.event_ids.push_back(ev);
            return true;
        };
        for (const auto& s : b.stmts) {
            const bool from_ok = mention(s.from, s.span);
            if (!s.to) continue;
            const bool to_ok = mention(*s.to, s.span);
            if (from_ok && to_ok && seen_edges.insert({s.from, *s.to}).second)
                bm.edges.emplace_back(s.from, *s.to);
        }
        behaviors.push_back(std::move(bm));
    }

    if (!r.errors.empty()) return {std::nullopt, std::move(r.errors)};

    BuildResult built = build_model(std::move(r.thimacs), std::move(r.shared_links),
                                    std::move(r.actions), std::move(flows), std::move(triggers));
    if (!built.ok()) {
        // Resurface residual structural findings with the declaring span.
        std::vector<ParseError> errs;
        for (const auto& e : built.errors) {
            SourceSpan span{1, 1, 0};
            if (auto it = r.thimac_spans.find(e.subject); it != r.thimac_spans.end())
                span = it->second;
            errs.push_back({span, e.code, e.message});
        }
        return {std::nullopt, std::move(errs)};
    }

    ModelDocument doc;
    doc.static_model = std::move(*built.model);
    doc.events = std::move(events);
    doc.behaviors = std::move(behaviors);
    return {std::move(doc), {}};
}

namespace {

std::string quote_label(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void emit_thimac(const ModelDocument& doc, const Thimac& t, int indent, std::ostream& os) {
    const StaticModel& m = doc.static_model;
    const std::string pad(indent * 2, ' ');
    os << pad << "thimac " << t.name << (t.declared_oo ? " oo" : "") << " {\n";
    const auto owned = m.actions_of(t.id);
    if (!owned.empty()) {
        os << pad << "  machine {\n";
        for (const Action* a : owned) {
            os << pad << "    " << to_string(a->kind);
            if (!a->thing_label.empty()) os << ": " << a->thing_label;
            os << ";\n";
        }
        os << pad << "  }\n";
    }
    for (const auto& l : m.parts_of(t.id))
        if (l.kind == LinkKind::Shared) os << pad << "  shared part " << l.part << ";\n";
    for (const auto& child : m.thimacs())
        if (child.parent && *child.parent == t.id) emit_thimac(doc, child, indent + 1, os);
    os << pad << "}\n";
}

} // namespace

std::string round_trip(const ModelDocument& doc) {
    std::ostringstream os;
    const StaticModel& m = doc.static_model;
    for (const auto& t : m.thimacs())
        if (!t.parent) emit_thimac(doc, t, 0, os);
    for (const auto& f : m.flows()) os << "flow " << f.src << " -> " << f.dst << ";\n";
    for (const auto& t : m.triggers()) os << "trigger " << t.src << " ~> " << t.dst << ";\n";
    for (const auto& e : doc.events) {
        os << "event " << e.id << " over {";
        bool first = true;
        for (const auto& a : e.action_ids) {
            if (!first) os << ", ";
            os << a;
            first = false;
        }
        os << "}";
        if (!e.time_label.empty()) os << " at " << quote_label(e.time_label);
        os << ";\n";
    }
    for (const auto& b : doc.behaviors) {
        os << "behavior " << b.id << " {\n";
        for (const auto& ev : b.event_ids) os << "  " << ev << ";\n";
        for (const auto& [from, to] : b.edges) os << "  " << from << " -> " << to << ";\n";
        os << "}\n";
    }
    return os.str();
}

namespace {

template <typename T>
std::vector<T> sorted_by(std::vector<T> v, auto key) {
    std::sort(v.begin(), v.end(), [&](const T& a, const T& b) { return key(a) < key(b); });
    return v;
}

} // namespace

bool structurally_equal(const ModelDocument& a, const ModelDocument& b) {
    const StaticModel& ma = a.static_model;
    const StaticModel& mb = b.static_model;
    auto thimac_key = [](const Thimac& t) { return t.id; };
    if (sorted_by(ma.thimacs(), thimac_key) != sorted_by(mb.thimacs(), thimac_key)) return false;
    auto link_key = [](const PartLink& l) { return std::tuple(l.whole, l.part, l.kind); };
    if (sorted_by(ma.part_links(), link_key) != sorted_by(mb.part_links(), link_key))
        return false;
    auto action_key = [](const Action& x) { return x.id; };
    if (sorted_by(ma.actions(), action_key) != sorted_by(mb.actions(), action_key)) return false;
    auto edge_key = [](const auto& e) { return std::tuple(e.src, e.dst); };
    if (sorted_by(ma.flows(), edge_key) != sorted_by(mb.flows(), edge_key)) return false;
    if (sorted_by(ma.triggers(), edge_key) != sorted_by(mb.triggers(), edge_key)) return false;
    auto event_key = [](const Event& e) { return e.id; };
    if (sorted_by(a.events, event_key) != sorted_by(b.events, event_key)) return false;
    auto behavior_key = [](const BehavioralModel& x) { return x.id; };
    if (sorted_by(a.behaviors, behavior_key) != sorted_by(b.behaviors, behavior_key))
        return false;
    return true;
}

} // namespace tmkit
