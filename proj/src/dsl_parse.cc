// Copyright 2026 The qoblivion Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

#include "qob/dsl.h"

namespace qob::dsl {

namespace {

constexpr int max_expression_depth = 64;
constexpr size_t max_space_dim = 4096;
constexpr double normalization_tolerance = 1e-9;
constexpr double unitarity_tolerance = 1e-8;

const std::set<std::string, std::less<>> reserved_names = {"I", "i", "sqrt", "pass", "fail"};

struct Failure {
    Severity severity;
    int column;
    std::string message;
    std::vector<std::string> expected;
};

[[noreturn]] void invalid(int column, std::string message) {
    throw Failure{Severity::validation, column, std::move(message), {}};
}

bool is_alpha(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_digit(char c) {
    return c >= '0' && c <= '9';
}

bool is_ident_char(char c) {
    return is_alpha(c) || is_digit(c) || c == '_';
}

bool is_label_char(char c) {
    return is_ident_char(c) || c == '\'' || c == '.';
}

class Cursor {
   public:
    Cursor(std::string_view text, int first_column) : text_(text), first_column_(first_column) {
    }

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) {
            pos_++;
        }
    }

    bool at_end() {
        skip_ws();
        return pos_ >= text_.size();
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool accept(char c) {
        if (peek() == c) {
            pos_++;
            return true;
        }
        return false;
    }

    bool accept(std::string_view s) {
        skip_ws();
        if (text_.substr(pos_).starts_with(s)) {
            pos_ += s.size();
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            fail(std::string("unexpected ") + describe_next(), {std::string("'") + c + "'"});
        }
    }

    void expect_end() {
        if (!at_end()) {
            fail(std::string("unexpected ") + describe_next(), {"end of line"});
        }
    }

    std::string ident(const char *what = "name") {
        skip_ws();
        size_t start = pos_;
        if (pos_ < text_.size() && (is_alpha(text_[pos_]) || text_[pos_] == '_')) {
            while (pos_ < text_.size() && is_ident_char(text_[pos_])) {
                pos_++;
            }
        }
        if (start == pos_) {
            fail(std::string("unexpected ") + describe_next(), {what});
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    std::string label() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < text_.size() && is_label_char(text_[pos_])) {
            pos_++;
        }
        if (start == pos_) {
            fail(std::string("unexpected ") + describe_next(), {"label"});
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    bool at_label() {
        return is_label_char(peek());
    }

    bool at_ident() {
        char c = peek();
        return is_alpha(c) || c == '_';
    }

    /// Reads a plain decimal number; the caller has checked that one starts here.
    double number() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < text_.size() && (is_digit(text_[pos_]) || text_[pos_] == '.')) {
            pos_++;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            size_t k = pos_ + 1;
            if (k < text_.size() && (text_[k] == '+' || text_[k] == '-')) {
                k++;
            }
            if (k < text_.size() && is_digit(text_[k])) {
                pos_ = k;
                while (pos_ < text_.size() && is_digit(text_[pos_])) {
                    pos_++;
                }
            }
        }
        double value = 0;
        auto [end, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (ec != std::errc() || end != text_.data() + pos_ || !std::isfinite(value)) {
            pos_ = start;
            fail("malformed number", {"number"});
        }
        return value;
    }

    int column() {
        skip_ws();
        return first_column_ + static_cast<int>(pos_);
    }

    [[noreturn]] void fail(std::string message, std::vector<std::string> expected) {
        throw Failure{Severity::syntax, column(), std::move(message), std::move(expected)};
    }

    std::string describe_next() {
        if (at_end()) {
            return "end of line";
        }
        char c = text_[pos_];
        if (static_cast<unsigned char>(c) < 0x20 || static_cast<unsigned char>(c) >= 0x7f) {
            return "byte 0x" + fmt_hex(static_cast<unsigned char>(c));
        }
        return std::string("'") + c + "'";
    }

   private:
    static std::string fmt_hex(unsigned v) {
        const char *digits = "0123456789abcdef";
        return {digits[v >> 4], digits[v & 15]};
    }

    std::string_view text_;
    int first_column_;
    size_t pos_ = 0;
};

using Poly = std::vector<Term>;

bool is_scalar(const Poly &p) {
    return std::all_of(p.begin(), p.end(), [](const Term &t) {
        return t.conditions.empty();
    });
}

cplx scalar_value(const Poly &p) {
    cplx total = 0;
    for (const auto &t : p) {
        total += t.coefficient;
    }
    return total;
}

Poly scalar(cplx v) {
    if (v == cplx(0)) {
        return {};
    }
    return {Term{v, {}}};
}

Poly merge_like(const Poly &p) {
    Poly out;
    for (const auto &t : p) {
        auto it = std::find_if(out.begin(), out.end(), [&](const Term &u) {
            return u.conditions == t.conditions;
        });
        if (it == out.end()) {
            out.push_back(t);
        } else {
            it->coefficient += t.coefficient;
        }
    }
    std::erase_if(out, [](const Term &t) {
        return t.coefficient == cplx(0);
    });
    return out;
}

struct ExprContext {
    const std::vector<FactorDecl> *factors = nullptr;
    const std::map<std::string, Poly, std::less<>> *names = nullptr;
};

const FactorDecl *find_factor(const std::vector<FactorDecl> &factors, std::string_view name, size_t *index = nullptr) {
    for (size_t k = 0; k < factors.size(); k++) {
        if (factors[k].name == name) {
            if (index) {
                *index = k;
            }
            return &factors[k];
        }
    }
    return nullptr;
}

bool has_label(const FactorDecl &f, const std::string &label) {
    return std::find(f.labels.begin(), f.labels.end(), label) != f.labels.end();
}

/// Intersects two canonical condition lists. Returns false when the product is zero.
bool multiply_conditions(
    const std::vector<FactorDecl> &factors,
    const std::vector<LabelCondition> &a,
    const std::vector<LabelCondition> &b,
    std::vector<LabelCondition> &out) {
    out.clear();
    for (const auto &f : factors) {
        const LabelCondition *ca = nullptr;
        const LabelCondition *cb = nullptr;
        for (const auto &c : a) {
            if (c.factor == f.name) {
                ca = &c;
            }
        }
        for (const auto &c : b) {
            if (c.factor == f.name) {
                cb = &c;
            }
        }
        if (!ca && !cb) {
            continue;
        }
        LabelCondition merged{f.name, {}};
        for (const auto &l : f.labels) {
            bool in_a = !ca || std::find(ca->labels.begin(), ca->labels.end(), l) != ca->labels.end();
            bool in_b = !cb || std::find(cb->labels.begin(), cb->labels.end(), l) != cb->labels.end();
            if (in_a && in_b) {
                merged.labels.push_back(l);
            }
        }
        if (merged.labels.empty()) {
            return false;
        }
        out.push_back(std::move(merged));
    }
    return true;
}

class ExprParser {
   public:
    ExprParser(Cursor &cursor, const ExprContext &ctx) : c_(cursor), ctx_(ctx) {
    }

    Poly expr() {
        Guard guard(*this);
        Poly p = term();
        while (true) {
            if (c_.accept('+')) {
                p = add(p, term());
            } else if (c_.accept('-')) {
                p = add(p, negate(term()));
            } else {
                return p;
            }
        }
    }

    cplx scalar_expr() {
        int column = c_.column();
        Poly p = expr();
        return require_scalar(p, column);
    }

   private:
    struct Guard {
        explicit Guard(ExprParser &p) : parser(p) {
            if (++parser.depth_ > max_expression_depth) {
                parser.c_.fail("expression nested too deeply", {});
            }
        }
        ~Guard() {
            parser.depth_--;
        }
        ExprParser &parser;
    };

    Poly term() {
        Poly p = unary();
        while (true) {
            if (c_.accept('*')) {
                p = multiply(p, unary());
            } else if (c_.accept('/')) {
                int column = c_.column();
                cplx d = require_scalar(unary(), column);
                if (d == cplx(0)) {
                    throw Failure{Severity::validation, column, "division by zero", {}};
                }
                p = scale(p, cplx(1) / d, column);
            } else if (starts_primary()) {
                p = multiply(p, unary());
            } else {
                return p;
            }
        }
    }

    Poly unary() {
        Guard guard(*this);
        if (c_.accept('-')) {
            return negate(unary());
        }
        if (c_.accept('+')) {
            return unary();
        }
        return primary();
    }

    bool starts_primary() {
        char ch = c_.peek();
        return is_digit(ch) || ch == '.' || ch == '(' || ch == '[' || is_alpha(ch) || ch == '_';
    }

    Poly primary() {
        char ch = c_.peek();
        if (is_digit(ch) || ch == '.') {
            return scalar(c_.number());
        }
        if (c_.accept('(')) {
            int column = c_.column();
            Poly p = expr();
            if (c_.accept(',')) {
                cplx re = require_scalar(p, column);
                cplx im = scalar_expr();
                p = scalar(re.imag() == 0 && im.imag() == 0 ? cplx(re.real(), im.real()) : re + cplx(0, 1) * im);
            }
            c_.expect(')');
            return p;
        }
        if (ch == '[') {
            return projector();
        }
        if (is_alpha(ch) || ch == '_') {
            int column = c_.column();
            std::string name = c_.ident();
            if (name == "i") {
                return scalar(cplx(0, 1));
            }
            if (name == "sqrt") {
                c_.expect('(');
                cplx v = scalar_expr();
                c_.expect(')');
                if (v.imag() == 0 && v.real() >= 0) {
                    return scalar(std::sqrt(v.real()));
                }
                return scalar(std::sqrt(v));
            }
            if (name == "I" && ctx_.factors) {
                return {Term{1, {}}};
            }
            if (ctx_.names) {
                auto it = ctx_.names->find(name);
                if (it != ctx_.names->end()) {
                    return it->second;
                }
                invalid(column, "unknown observable '" + name + "'");
            }
            throw Failure{Severity::syntax, column, "unknown name '" + name + "'", {"number", "i", "sqrt("}};
        }
        std::vector<std::string> expected = {"number", "i", "sqrt(", "("};
        if (ctx_.factors) {
            expected.insert(expected.end(), {"[", "I", "observable name"});
        }
        c_.fail("unexpected " + c_.describe_next(), expected);
    }

    Poly projector() {
        int column = c_.column();
        c_.expect('[');
        if (!ctx_.factors) {
            throw Failure{Severity::syntax, column, "projectors are not allowed in amplitudes", {"number"}};
        }
        int factor_column = c_.column();
        std::string factor = c_.ident("factor name");
        const FactorDecl *f = find_factor(*ctx_.factors, factor);
        if (!f) {
            invalid(factor_column, "unknown factor '" + factor + "'");
        }
        c_.expect('=');
        std::vector<std::string> labels;
        auto read_label = [&] {
            int label_column = c_.column();
            std::string l = c_.label();
            if (!has_label(*f, l)) {
                invalid(label_column, "unknown label '" + l + "' for factor '" + factor + "'");
            }
            labels.push_back(l);
        };
        if (c_.accept('{')) {
            read_label();
            while (c_.accept(',')) {
                read_label();
            }
            c_.expect('}');
        } else {
            read_label();
        }
        c_.expect(']');
        LabelCondition cond{factor, {}};
        for (const auto &l : f->labels) {
            if (std::find(labels.begin(), labels.end(), l) != labels.end()) {
                cond.labels.push_back(l);
            }
        }
        return {Term{1, {cond}}};
    }

    cplx require_scalar(const Poly &p, int column) {
        if (!is_scalar(p)) {
            throw Failure{Severity::validation, column, "expected a scalar, found an operator", {}};
        }
        return scalar_value(p);
    }

    static Poly add(Poly a, const Poly &b) {
        a.insert(a.end(), b.begin(), b.end());
        return merge_like(a);
    }

    static Poly negate(Poly a) {
        for (auto &t : a) {
            t.coefficient = -t.coefficient;
        }
        return a;
    }

    Poly scale(Poly a, cplx s, int column) {
        for (auto &t : a) {
            t.coefficient *= s;
            if (!std::isfinite(t.coefficient.real()) || !std::isfinite(t.coefficient.imag())) {
                invalid(column, "value is not finite");
            }
        }
        return merge_like(a);
    }

    Poly multiply(const Poly &a, const Poly &b) {
        int column = c_.column();
        Poly out;
        std::vector<LabelCondition> conds;
        static const std::vector<FactorDecl> no_factors;
        const auto &factors = ctx_.factors ? *ctx_.factors : no_factors;
        for (const auto &ta : a) {
            for (const auto &tb : b) {
                if (!multiply_conditions(factors, ta.conditions, tb.conditions, conds)) {
                    continue;
                }
                cplx v = ta.coefficient * tb.coefficient;
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                    invalid(column, "value is not finite");
                }
                out.push_back(Term{v, conds});
            }
        }
        return merge_like(out);
    }

    Cursor &c_;
    const ExprContext &ctx_;
    int depth_ = 0;
};

/// "expr" or a bare "re,im" pair.
cplx parse_amplitude(Cursor &c) {
    ExprContext ctx;
    ExprParser p(c, ctx);
    cplx v = p.scalar_expr();
    if (c.accept(',')) {
        cplx im = p.scalar_expr();
        v = v.imag() == 0 && im.imag() == 0 ? cplx(v.real(), im.real()) : v + cplx(0, 1) * im;
    }
    c.expect_end();
    return v;
}

struct Line {
    int number;
    std::string_view text;
};

struct Section {
    std::string name;
    std::string argument;
    SourcePos pos;
    std::vector<Line> lines;
};

const std::vector<std::string> section_order = {"FACTORS", "CUT", "INITIAL", "GATES", "POSTSELECT", "OBSERVABLES"};

class Parser {
   public:
    explicit Parser(std::string_view text) : text_(text) {
    }

    ParseResult run() {
        split_sections();
        if (!has_errors()) {
            try {
                build();
            } catch (const Failure &f) {
                add(f.severity, {0, 0}, f.message, f.expected);
            }
        }
        ParseResult r;
        if (!has_errors()) {
            r.spec = std::move(spec_);
        }
        r.diagnostics = std::move(diagnostics_);
        return r;
    }

   private:
    bool has_errors() const {
        return std::any_of(diagnostics_.begin(), diagnostics_.end(), [](const Diagnostic &d) {
            return d.severity != Severity::warning;
        });
    }

    void add(Severity s, SourcePos pos, std::string message, std::vector<std::string> expected = {}) {
        diagnostics_.push_back({s, pos, std::move(message), std::move(expected)});
    }

    /// Runs `body` on one line, converting a failure into a diagnostic. Returns false on failure.
    template <typename F>
    bool guarded(const Line &line, F &&body) {
        try {
            body();
            return true;
        } catch (const Failure &f) {
            add(f.severity, {line.number, f.column}, f.message, f.expected);
        }
        return false;
    }

    void split_sections() {
        int number = 0;
        size_t start = 0;
        Section *current = nullptr;
        while (start <= text_.size()) {
            size_t end = text_.find('\n', start);
            if (end == std::string_view::npos) {
                end = text_.size();
            }
            std::string_view raw = text_.substr(start, end - start);
            start = end + 1;
            number++;
            if (auto hash = raw.find('#'); hash != std::string_view::npos) {
                raw = raw.substr(0, hash);
            }
            while (!raw.empty() && (raw.back() == '\r' || raw.back() == ' ' || raw.back() == '\t')) {
                raw.remove_suffix(1);
            }
            Line line{number, raw};
            Cursor c(raw, 1);
            if (c.at_end()) {
                continue;
            }
            std::string word;
            if (c.at_ident()) {
                Cursor probe(raw, 1);
                word = probe.ident();
            }
            bool is_header = word == "SCENARIO" ||
                             std::find(section_order.begin(), section_order.end(), word) != section_order.end();
            if (!is_header) {
                if (!current) {
                    guarded(line, [&] {
                        c.fail("content outside a section", {"SCENARIO", "FACTORS"});
                    });
                } else {
                    current->lines.push_back(line);
                }
                continue;
            }
            guarded(line, [&] {
                int column = c.column();
                c.ident();
                if (word == "SCENARIO") {
                    if (seen_scenario_) {
                        throw Failure{Severity::syntax, column, "duplicate SCENARIO line", {}};
                    }
                    seen_scenario_ = true;
                    spec_.id = c.ident("scenario id");
                    c.expect_end();
                    current = nullptr;
                    return;
                }
                if (sections_.count(word)) {
                    throw Failure{Severity::syntax, column, "duplicate section " + word, {}};
                }
                Section s{word, "", {line.number, column}, {}};
                if (word == "POSTSELECT" && c.at_ident()) {
                    s.argument = c.ident("outcome name");
                }
                c.expect_end();
                current = &sections_.emplace(word, std::move(s)).first->second;
            });
        }
    }

    const Section *section(const std::string &name) const {
        auto it = sections_.find(name);
        return it == sections_.end() ? nullptr : &it->second;
    }

    void build() {
        parse_factors();
        if (has_errors()) {
            return;
        }
        parse_cut();
        parse_initial();
        parse_gates();
        parse_postselect();
        parse_observables();
    }

    void parse_factors() {
        const Section *s = section("FACTORS");
        size_t dim = 1;
        if (s) {
            for (const auto &line : s->lines) {
                guarded(line, [&] {
                    Cursor c(line.text, 1);
                    FactorDecl f;
                    f.pos = {line.number, c.column()};
                    int name_column = c.column();
                    f.name = c.ident("factor name");
                    if (reserved_names.count(f.name)) {
                        invalid(name_column, "'" + f.name + "' is reserved");
                    }
                    if (find_factor(spec_.factors, f.name)) {
                        invalid(name_column, "duplicate factor '" + f.name + "'");
                    }
                    c.expect(':');
                    do {
                        int label_column = c.column();
                        std::string l = c.label();
                        if (has_label(f, l)) {
                            invalid(label_column, "duplicate label '" + l + "'");
                        }
                        f.labels.push_back(l);
                    } while (c.at_label());
                    c.expect_end();
                    dim *= f.labels.size();
                    if (dim > max_space_dim) {
                        invalid(name_column, "Hilbert space larger than " + std::to_string(max_space_dim));
                    }
                    spec_.factors.push_back(std::move(f));
                });
            }
        }
        if (spec_.factors.empty() && !has_errors()) {
            add(Severity::validation, s ? s->pos : SourcePos{1, 1}, "no factors");
        }
    }

    void parse_cut() {
        const Section *s = section("CUT");
        if (!s) {
            return;
        }
        int first_line = s->pos.line;
        for (const auto &line : s->lines) {
            guarded(line, [&] {
                Cursor c(line.text, 1);
                while (!c.at_end()) {
                    int column = c.column();
                    std::string name = c.ident("factor name");
                    if (!find_factor(spec_.factors, name)) {
                        invalid(column, "unknown factor '" + name + "'");
                    }
                    if (std::find(spec_.cut.begin(), spec_.cut.end(), name) != spec_.cut.end()) {
                        invalid(column, "factor '" + name + "' listed twice");
                    }
                    spec_.cut.push_back(name);
                }
            });
        }
        if (spec_.cut.empty() || spec_.cut.size() >= spec_.factors.size()) {
            add(Severity::validation, {first_line, s->pos.column}, "CUT must leave factors on both sides");
        }
    }

    std::vector<AmplitudeEntry> parse_superposition(const Section &s, const char *what) {
        std::vector<AmplitudeEntry> out;
        bool line_failed = false;
        for (const auto &line : s.lines) {
            line_failed |= !guarded(line, [&] {
                Cursor c(line.text, 1);
                AmplitudeEntry e;
                e.pos = {line.number, c.column()};
                while (e.labels.size() < spec_.factors.size()) {
                    const FactorDecl &f = spec_.factors[e.labels.size()];
                    int column = c.column();
                    std::string l = c.label();
                    if (!has_label(f, l)) {
                        invalid(column, "unknown label '" + l + "' for factor '" + f.name + "'");
                    }
                    e.labels.push_back(l);
                }
                if (c.at_label()) {
                    invalid(c.column(), "expected " + std::to_string(spec_.factors.size()) + " labels");
                }
                c.expect('=');
                e.amplitude = parse_amplitude(c);
                for (const auto &prev : out) {
                    if (prev.labels == e.labels) {
                        invalid(e.pos.column, "basis state listed twice");
                    }
                }
                out.push_back(std::move(e));
            });
        }
        if (line_failed) {
            return out;
        }
        double norm2 = 0;
        for (const auto &e : out) {
            norm2 += std::norm(e.amplitude);
        }
        double norm = std::sqrt(norm2);
        if (!(norm > 0) || !std::isfinite(norm)) {
            add(Severity::validation, s.pos, std::string(what) + " state has zero norm");
        } else if (std::abs(norm - 1) > normalization_tolerance) {
            for (auto &e : out) {
                e.amplitude /= norm;
            }
            add(Severity::warning, s.pos, std::string(what) + " state normalized (norm was " + std::to_string(norm) + ")");
        }
        return out;
    }

    void parse_initial() {
        const Section *s = section("INITIAL");
        if (!s) {
            add(Severity::validation, {1, 1}, "no initial state", {"INITIAL"});
            return;
        }
        spec_.initial = parse_superposition(*s, "initial");
    }

    void parse_postselect() {
        const Section *s = section("POSTSELECT");
        if (!s) {
            return;
        }
        PostSelection p;
        if (!s->argument.empty()) {
            p.name = s->argument;
        }
        p.pos = s->pos;
        p.amplitudes = parse_superposition(*s, "post-selected");
        spec_.postselect = std::move(p);
    }

    std::string parse_target(Cursor &c, Gate &g) {
        int column = c.column();
        std::string name = c.ident("factor name");
        if (!find_factor(spec_.factors, name)) {
            invalid(column, "unknown factor '" + name + "'");
        }
        if (std::find(g.targets.begin(), g.targets.end(), name) != g.targets.end()) {
            invalid(column, "factor '" + name + "' targeted twice in one gate");
        }
        g.targets.push_back(name);
        return name;
    }

    std::string parse_label_of(Cursor &c, const std::string &factor) {
        int column = c.column();
        std::string l = c.label();
        if (!has_label(*find_factor(spec_.factors, factor), l)) {
            invalid(column, "unknown label '" + l + "' for factor '" + factor + "'");
        }
        return l;
    }

    void parse_gates() {
        const Section *s = section("GATES");
        if (!s) {
            return;
        }
        for (const auto &line : s->lines) {
            guarded(line, [&] {
                Cursor c(line.text, 1);
                Gate g;
                g.pos = {line.number, c.column()};
                int epoch_column = c.column();
                std::string epoch = c.label();
                auto e = parse_epoch(epoch);
                if (!e) {
                    throw Failure{Severity::syntax, epoch_column, "unknown epoch '" + epoch + "'", {"t0", "t1", "t2", "final"}};
                }
                g.epoch = *e;
                if (!spec_.gates.empty() && g.epoch < spec_.gates.back().epoch) {
                    invalid(epoch_column, "gates must be listed in epoch order");
                }
                int kind_column = c.column();
                std::string kind = c.ident("gate kind");
                if (kind == "beamsplitter") {
                    parse_beamsplitter(c, g);
                } else if (kind == "swap_map") {
                    parse_swap(c, g);
                } else if (kind == "projector_select") {
                    parse_select(c, g);
                } else if (kind == "custom_unitary") {
                    parse_custom(c, g);
                } else {
                    throw Failure{
                        Severity::syntax,
                        kind_column,
                        "unknown gate '" + kind + "'",
                        {"beamsplitter", "swap_map", "projector_select", "custom_unitary"}};
                }
                c.expect_end();
                spec_.gates.push_back(std::move(g));
            });
        }
    }

    void parse_beamsplitter(Cursor &c, Gate &g) {
        g.kind = GateKind::beamsplitter;
        std::string f = parse_target(c, g);
        c.expect('(');
        int column = c.column();
        g.port_a = parse_label_of(c, f);
        c.expect(',');
        g.port_b = parse_label_of(c, f);
        c.expect(')');
        if (g.port_a == g.port_b) {
            invalid(column, "splitter ports must differ");
        }
        while (c.at_ident()) {
            int opt_column = c.column();
            std::string opt = c.ident();
            bool *flag = opt == "inverse" ? &g.inverse : opt == "labeled" ? &g.labeled : nullptr;
            if (!flag) {
                throw Failure{Severity::syntax, opt_column, "unknown option '" + opt + "'", {"inverse", "labeled"}};
            }
            if (*flag) {
                throw Failure{Severity::syntax, opt_column, "option '" + opt + "' given twice", {}};
            }
            *flag = true;
        }
    }

    void parse_swap(Cursor &c, Gate &g) {
        g.kind = GateKind::swap_map;
        do {
            parse_target(c, g);
        } while (c.at_ident());
        c.expect(':');
        for (const auto &t : g.targets) {
            g.from.push_back(parse_label_of(c, t));
        }
        if (!c.accept("<->")) {
            c.fail("unexpected " + c.describe_next(), {"<->"});
        }
        int column = c.column();
        for (const auto &t : g.targets) {
            g.to.push_back(parse_label_of(c, t));
        }
        if (g.from == g.to) {
            invalid(column, "swap_map needs two distinct basis states");
        }
    }

    void parse_select(Cursor &c, Gate &g) {
        g.kind = GateKind::projector_select;
        while (c.at_ident()) {
            int column = c.column();
            Cursor probe = c;
            std::string key = probe.ident();
            if (key == "pass" || key == "fail") {
                c = probe;
                c.expect('=');
                std::string &slot = key == "pass" ? g.pass_name : g.fail_name;
                if (!slot.empty()) {
                    throw Failure{Severity::syntax, column, key + " given twice", {}};
                }
                slot = c.ident("outcome name");
                continue;
            }
            if (!g.pass_name.empty() || !g.fail_name.empty()) {
                c.fail("conditions must precede pass= and fail=", {"pass=", "fail="});
            }
            std::string f = parse_target(c, g);
            c.expect('=');
            LabelCondition cond{f, {}};
            std::vector<std::string> labels;
            if (c.accept('{')) {
                do {
                    labels.push_back(parse_label_of(c, f));
                } while (c.accept(','));
                c.expect('}');
            } else {
                labels.push_back(parse_label_of(c, f));
            }
            for (const auto &l : find_factor(spec_.factors, f)->labels) {
                if (std::find(labels.begin(), labels.end(), l) != labels.end()) {
                    cond.labels.push_back(l);
                }
            }
            g.conditions.push_back(std::move(cond));
        }
        if (g.conditions.empty()) {
            c.fail("unexpected " + c.describe_next(), {"factor={labels}"});
        }
        if (g.pass_name.empty() || g.fail_name.empty()) {
            c.fail("unexpected " + c.describe_next(), {g.pass_name.empty() ? "pass=" : "fail="});
        }
        if (g.pass_name == g.fail_name) {
            invalid(g.pos.column, "pass and fail outcomes need different names");
        }
    }

    void parse_custom(Cursor &c, Gate &g) {
        g.kind = GateKind::custom_unitary;
        size_t dim = 1;
        do {
            dim *= find_factor(spec_.factors, parse_target(c, g))->labels.size();
        } while (c.at_ident());
        c.expect('=');
        int column = c.column();
        c.expect('[');
        std::vector<std::vector<cplx>> rows(1);
        ExprContext ctx;
        ExprParser p(c, ctx);
        while (true) {
            rows.back().push_back(p.scalar_expr());
            if (rows.back().size() > max_space_dim) {
                invalid(column, "matrix too large");
            }
            if (c.accept(',')) {
                continue;
            }
            if (c.accept(';')) {
                rows.emplace_back();
                if (rows.size() > max_space_dim) {
                    invalid(column, "matrix too large");
                }
                continue;
            }
            if (c.accept(']')) {
                break;
            }
            c.fail("unexpected " + c.describe_next(), {",", ";", "]"});
        }
        for (const auto &r : rows) {
            if (r.size() != rows.size()) {
                invalid(column, "matrix must be square");
            }
        }
        if (rows.size() != dim) {
            invalid(
                column,
                "matrix is " + std::to_string(rows.size()) + "x" + std::to_string(rows.size()) + " but the targets span dimension " +
                    std::to_string(dim));
        }
        auto n = static_cast<Eigen::Index>(dim);
        g.matrix = Eigen::MatrixXcd(n, n);
        for (Eigen::Index r = 0; r < n; r++) {
            for (Eigen::Index k = 0; k < n; k++) {
                g.matrix(r, k) = rows[static_cast<size_t>(r)][static_cast<size_t>(k)];
            }
        }
        double err = (g.matrix.adjoint() * g.matrix - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
        if (!(err <= unitarity_tolerance)) {
            invalid(column, "matrix is not unitary (deviation " + std::to_string(err) + ")");
        }
    }

    void parse_observables() {
        const Section *s = section("OBSERVABLES");
        if (!s) {
            return;
        }
        std::map<std::string, Poly, std::less<>> names;
        ExprContext ctx{&spec_.factors, &names};
        for (const auto &line : s->lines) {
            guarded(line, [&] {
                Cursor c(line.text, 1);
                ObservableDecl o;
                o.pos = {line.number, c.column()};
                o.name = c.ident("observable name");
                if (reserved_names.count(o.name)) {
                    invalid(o.pos.column, "'" + o.name + "' is reserved");
                }
                if (names.count(o.name)) {
                    invalid(o.pos.column, "duplicate observable '" + o.name + "'");
                }
                c.expect('=');
                ExprParser p(c, ctx);
                o.terms = p.expr();
                c.expect_end();
                names.emplace(o.name, o.terms);
                spec_.observables.push_back(std::move(o));
            });
        }
    }

    std::string_view text_;
    ScenarioSpec spec_;
    bool seen_scenario_ = false;
    std::map<std::string, Section> sections_;
    std::vector<Diagnostic> diagnostics_;
};

bool same_entries(const std::vector<AmplitudeEntry> &a, const std::vector<AmplitudeEntry> &b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](const AmplitudeEntry &x, const AmplitudeEntry &y) {
        return x.labels == y.labels && x.amplitude == y.amplitude;
    });
}

bool same_gate(const Gate &a, const Gate &b) {
    bool same_matrix = a.matrix.rows() == b.matrix.rows() && a.matrix.cols() == b.matrix.cols() &&
                       (a.matrix.size() == 0 || (a.matrix.array() == b.matrix.array()).all());
    return a.epoch == b.epoch && a.kind == b.kind && a.targets == b.targets && a.port_a == b.port_a &&
           a.port_b == b.port_b && a.inverse == b.inverse && a.labeled == b.labeled && a.from == b.from &&
           a.to == b.to && a.conditions == b.conditions && a.pass_name == b.pass_name &&
           a.fail_name == b.fail_name && same_matrix;
}

}  // namespace

std::string to_string(SourcePos pos) {
    return std::to_string(pos.line) + ":" + std::to_string(pos.column);
}

const char *gate_kind_name(GateKind kind) {
    switch (kind) {
        case GateKind::beamsplitter:
            return "beamsplitter";
        case GateKind::swap_map:
            return "swap_map";
        case GateKind::projector_select:
            return "projector_select";
        case GateKind::custom_unitary:
            return "custom_unitary";
    }
    return "?";
}

const char *severity_name(Severity s) {
    switch (s) {
        case Severity::syntax:
            return "syntax error";
        case Severity::validation:
            return "validation error";
        case Severity::warning:
            return "warning";
    }
    return "?";
}

std::string format_diagnostic(const Diagnostic &d, std::string_view source_name) {
    std::string out(source_name);
    out += ":" + to_string(d.pos) + ": " + severity_name(d.severity) + ": " + d.message;
    if (!d.expected.empty()) {
        out += " (expected ";
        for (size_t k = 0; k < d.expected.size(); k++) {
            out += (k ? ", " : "") + d.expected[k];
        }
        out += ")";
    }
    return out;
}

bool operator==(const ScenarioSpec &a, const ScenarioSpec &b) {
    auto same_factors = std::equal(
        a.factors.begin(), a.factors.end(), b.factors.begin(), b.factors.end(), [](const FactorDecl &x, const FactorDecl &y) {
            return x.name == y.name && x.labels == y.labels;
        });
    auto same_gates = std::equal(a.gates.begin(), a.gates.end(), b.gates.begin(), b.gates.end(), same_gate);
    auto same_observables = std::equal(
        a.observables.begin(),
        a.observables.end(),
        b.observables.begin(),
        b.observables.end(),
        [](const ObservableDecl &x, const ObservableDecl &y) {
            return x.name == y.name && x.terms == y.terms;
        });
    bool same_post = a.postselect.has_value() == b.postselect.has_value() &&
                     (!a.postselect || (a.postselect->name == b.postselect->name &&
                                        same_entries(a.postselect->amplitudes, b.postselect->amplitudes)));
    return a.id == b.id && same_factors && a.cut == b.cut && same_entries(a.initial, b.initial) && same_gates &&
           same_post && same_observables;
}

ParseResult parse(std::string_view text) {
    try {
        return Parser(text).run();
    } catch (const std::exception &e) {
        ParseResult r;
        r.diagnostics.push_back({Severity::syntax, {0, 0}, std::string("internal parser failure: ") + e.what(), {}});
        return r;
    }
}

std::optional<cplx> evaluate_amplitude(std::string_view text, std::string *error) {
    try {
        Cursor c(text, 1);
        return parse_amplitude(c);
    } catch (const Failure &f) {
        if (error) {
            *error = "column " + std::to_string(f.column) + ": " + f.message;
        }
    }
    return std::nullopt;
}

}  // namespace qob::dsl
