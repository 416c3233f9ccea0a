// Copyright (c) 2026 the rff developers
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rff {

// Thrown on malformed parameter files; the message carries file:line context.
class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// One fine-structure Rydberg level with its quadratic Stark response.
// Energies are E/h in MHz relative to the owning channel's reference point;
// alpha is the scalar polarizability in MHz/(V/cm)^2 with the convention
// E(F) = energy0 - alpha F^2 / 2.
struct RydbergState {
    std::string label;
    int n = 0;
    int l = 0;
    double j = 0.0;
    double abs_mj = 0.0;
    double energy0_mhz = 0.0;
    double alpha_mhz_vcm2 = 0.0;
    std::string provenance;

    bool same_quantum_numbers(const RydbergState& o) const
    {
        return n == o.n && l == o.l && j == o.j && abs_mj == o.abs_mj;
    }
};

// A quasi-molecular transition |i1 i2> -> |f1 f2| driven by the dipole-dipole
// interaction. delta0 is the zero-field defect E(f1)+E(f2)-E(i1)-E(i2) in MHz;
// c3 is the effective dipole-dipole coefficient in MHz um^3.
struct InteractionChannel {
    std::string label;
    std::array<std::string, 2> initial_labels;
    std::array<std::string, 2> final_labels;
    double delta0_mhz = 0.0;
    double c3_mhz_um3 = 0.0;
    std::string provenance;
};

struct ParameterSet {
    std::vector<RydbergState> states;
    std::vector<InteractionChannel> channels;

    const RydbergState* find_state(std::string_view label) const
    {
        for (const auto& s : states)
            if (s.label == label) return &s;
        return nullptr;
    }

    const RydbergState& state(std::string_view label) const
    {
        if (const auto* s = find_state(label)) return *s;
        throw std::out_of_range("unknown state '" + std::string(label) + "'");
    }

    const InteractionChannel* find_channel(std::string_view label) const
    {
        for (const auto& c : channels)
            if (c.label == label) return &c;
        return nullptr;
    }

    const InteractionChannel& channel(std::string_view label) const
    {
        if (const auto* c = find_channel(label)) return *c;
        throw std::out_of_range("unknown channel '" + std::string(label) + "'");
    }
};

// Quadratic Stark energy E(F) = energy0 - alpha F^2 / 2, MHz.
inline double stark_energy(const RydbergState& s, double f_vcm)
{
    if (!std::isfinite(f_vcm))
        throw std::invalid_argument("stark_energy: non-finite field");
    return s.energy0_mhz - 0.5 * s.alpha_mhz_vcm2 * f_vcm * f_vcm;
}

inline char orbital_letter(int l)
{
    constexpr std::string_view letters = "SPDFGHI";
    if (l < 0 || l >= static_cast<int>(letters.size()))
        throw std::invalid_argument("orbital_letter: L out of supported range");
    return letters[static_cast<std::size_t>(l)];
}

namespace detail {

inline int orbital_number(std::string_view letter)
{
    constexpr std::string_view letters = "SPDFGHI";
    if (letter.size() == 1) {
        const auto pos = letters.find(letter[0]);
        if (pos != std::string_view::npos) return static_cast<int>(pos);
    }
    return -1;
}

struct ParamToken {
    std::string text;
    bool quoted = false;
};

class ParamParser {
  public:
    ParamParser(std::string_view text, std::string name) : text_(text), name_(std::move(name)) {}

    ParameterSet run()
    {
        ParameterSet ps;
        bool saw_header = false;
        while (next_line()) {
            if (tokens_.empty()) continue;
            const std::string& head = tokens_[0].text;
            if (head == "format") {
                expect_tokens(3, "format <name> <version>");
                if (tokens_[1].text != "rff-params" || tokens_[2].text != "1")
                    fail("unsupported format '" + tokens_[1].text + " " + tokens_[2].text + "'");
                saw_header = true;
            } else if (head == "state") {
                if (!saw_header) fail("missing 'format rff-params 1' header");
                ps.states.push_back(parse_state());
            } else if (head == "channel") {
                if (!saw_header) fail("missing 'format rff-params 1' header");
                ps.channels.push_back(parse_channel());
            } else {
                fail("unexpected directive '" + head + "'");
            }
        }
        if (!saw_header) fail("missing 'format rff-params 1' header");
        validate(ps);
        return ps;
    }

  private:
    [[noreturn]] void fail(const std::string& msg) const
    {
        throw ParseError(name_ + ":" + std::to_string(line_no_) + ": " + msg);
    }

    void expect_tokens(std::size_t n, const char* shape) const
    {
        if (tokens_.size() != n) fail(std::string("expected '") + shape + "'");
    }

    // Splits the next non-empty line into whitespace-separated tokens,
    // honoring "quoted strings" with \" and \\ escapes and '#' comments.
    bool next_line()
    {
        tokens_.clear();
        while (pos_ < text_.size()) {
            ++line_no_;
            std::string line;
            while (pos_ < text_.size() && text_[pos_] != '\n') line.push_back(text_[pos_++]);
            if (pos_ < text_.size()) ++pos_;  // skip '\n'
            tokenize(line);
            if (!tokens_.empty()) return true;
        }
        return false;
    }

    void tokenize(const std::string& line)
    {
        std::size_t i = 0;
        while (i < line.size()) {
            if (std::isspace(static_cast<unsigned char>(line[i]))) {
                ++i;
            } else if (line[i] == '#') {
                return;
            } else if (line[i] == '"') {
                std::string s;
                ++i;
                bool closed = false;
                while (i < line.size()) {
                    if (line[i] == '\\' && i + 1 < line.size()) {
                        s.push_back(line[i + 1]);
                        i += 2;
                    } else if (line[i] == '"') {
                        ++i;
                        closed = true;
                        break;
                    } else {
                        s.push_back(line[i++]);
                    }
                }
                if (!closed) fail("unterminated string");
                tokens_.push_back({s, true});
            } else {
                std::string s;
                while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
                       line[i] != '#')
                    s.push_back(line[i++]);
                tokens_.push_back({s, false});
            }
        }
    }

    double number(const ParamToken& t, const std::string& field) const
    {
        const char* begin = t.text.c_str();
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end != begin + t.text.size() || t.text.empty())
            fail("field '" + field + "': cannot parse number '" + t.text + "'");
        if (!std::isfinite(v))
            fail("field '" + field + "': non-finite value '" + t.text + "'");
        return v;
    }

    int integer(const ParamToken& t, const std::string& field) const
    {
        const char* begin = t.text.c_str();
        char* end = nullptr;
        const long v = std::strtol(begin, &end, 10);
        if (end != begin + t.text.size() || t.text.empty())
            fail("field '" + field + "': cannot parse integer '" + t.text + "'");
        return static_cast<int>(v);
    }

    void open_block(const char* what)
    {
        expect_tokens(3, (std::string(what) + " <label> {").c_str());
        if (tokens_[2].text != "{") fail(std::string("expected '{' after ") + what + " label");
    }

    RydbergState parse_state()
    {
        RydbergState s;
        open_block("state");
        s.label = tokens_[1].text;
        bool have[6] = {};
        while (next_line()) {
            const std::string& key = tokens_[0].text;
            if (key == "}") return finish_state(s, have);
            if (key == "n") {
                expect_tokens(2, "n <int>");
                s.n = integer(tokens_[1], key);
                have[0] = true;
            } else if (key == "L") {
                expect_tokens(2, "L <letter>");
                s.l = orbital_number(tokens_[1].text);
                if (s.l < 0) fail("unknown orbital letter '" + tokens_[1].text + "'");
                have[1] = true;
            } else if (key == "J") {
                expect_tokens(2, "J <half-integer>");
                s.j = number(tokens_[1], key);
                have[2] = true;
            } else if (key == "abs_mJ") {
                expect_tokens(2, "abs_mJ <half-integer>");
                s.abs_mj = number(tokens_[1], key);
                have[3] = true;
            } else if (key == "energy0_MHz") {
                expect_tokens(2, "energy0_MHz <float>");
                s.energy0_mhz = number(tokens_[1], key);
                have[4] = true;
            } else if (key == "alpha_MHz_per_Vcm2") {
                expect_tokens(2, "alpha_MHz_per_Vcm2 <float>");
                s.alpha_mhz_vcm2 = number(tokens_[1], key);
                have[5] = true;
            } else if (key == "provenance") {
                expect_tokens(2, "provenance \"text\"");
                s.provenance = tokens_[1].text;
            } else {
                fail("unknown state field '" + key + "'");
            }
        }
        fail("unterminated state block");
    }

    RydbergState finish_state(RydbergState s, const bool have[6]) const
    {
        static constexpr const char* names[6] = {"n",           "L",
                                                 "J",           "abs_mJ",
                                                 "energy0_MHz", "alpha_MHz_per_Vcm2"};
        for (int i = 0; i < 6; ++i)
            if (!have[i]) fail("state '" + s.label + "': missing field '" + names[i] + "'");
        if (s.n < 1) fail("state '" + s.label + "': n must be >= 1");
        const auto half_integral = [](double v) { return std::abs(2.0 * v - std::round(2.0 * v)) < 1e-9; };
        if (!half_integral(s.j) || !half_integral(s.abs_mj))
            fail("state '" + s.label + "': J and abs_mJ must be half-integers");
        if (std::abs(s.j - (s.l - 0.5)) > 1e-9 && std::abs(s.j - (s.l + 0.5)) > 1e-9)
            fail("state '" + s.label + "': J must be L +/- 1/2");
        if (s.abs_mj < 0.0 || s.abs_mj > s.j + 1e-9)
            fail("state '" + s.label + "': abs_mJ must lie in [0, J]");
        return s;
    }

    InteractionChannel parse_channel()
    {
        InteractionChannel c;
        open_block("channel");
        c.label = tokens_[1].text;
        bool have[4] = {};
        while (next_line()) {
            const std::string& key = tokens_[0].text;
            if (key == "}") return finish_channel(c, have);
            if (key == "initial") {
                expect_tokens(3, "initial <state> <state>");
                c.initial_labels = {tokens_[1].text, tokens_[2].text};
                have[0] = true;
            } else if (key == "final") {
                expect_tokens(3, "final <state> <state>");
                c.final_labels = {tokens_[1].text, tokens_[2].text};
                have[1] = true;
            } else if (key == "delta0_MHz") {
                expect_tokens(2, "delta0_MHz <float>");
                c.delta0_mhz = number(tokens_[1], key);
                have[2] = true;
            } else if (key == "C3_MHz_um3") {
                expect_tokens(2, "C3_MHz_um3 <float>");
                c.c3_mhz_um3 = number(tokens_[1], key);
                have[3] = true;
            } else if (key == "provenance") {
                expect_tokens(2, "provenance \"text\"");
                c.provenance = tokens_[1].text;
            } else {
                fail("unknown channel field '" + key + "'");
            }
        }
        fail("unterminated channel block");
    }

    InteractionChannel finish_channel(InteractionChannel c, const bool have[4]) const
    {
        static constexpr const char* names[4] = {"initial", "final", "delta0_MHz", "C3_MHz_um3"};
        for (int i = 0; i < 4; ++i)
            if (!have[i]) fail("channel '" + c.label + "': missing field '" + names[i] + "'");
        return c;
    }

    void validate(const ParameterSet& ps) const
    {
        for (std::size_t i = 0; i < ps.states.size(); ++i) {
            for (std::size_t k = i + 1; k < ps.states.size(); ++k) {
                if (ps.states[i].label == ps.states[k].label)
                    throw ParseError(name_ + ": duplicate state label '" + ps.states[i].label + "'");
                if (ps.states[i].same_quantum_numbers(ps.states[k]))
                    throw ParseError(name_ + ": duplicate state key for '" + ps.states[i].label +
                                     "' and '" + ps.states[k].label + "'");
            }
        }
        for (std::size_t i = 0; i < ps.channels.size(); ++i)
            for (std::size_t k = i + 1; k < ps.channels.size(); ++k)
                if (ps.channels[i].label == ps.channels[k].label)
                    throw ParseError(name_ + ": duplicate channel label '" + ps.channels[i].label + "'");

        for (const auto& c : ps.channels) {
            double defect = 0.0;
            for (const auto& lbl : c.final_labels) {
                const auto* s = ps.find_state(lbl);
                if (!s)
                    throw ParseError(name_ + ": channel '" + c.label +
                                     "' references missing state '" + lbl + "'");
                defect += s->energy0_mhz;
            }
            for (const auto& lbl : c.initial_labels) {
                const auto* s = ps.find_state(lbl);
                if (!s)
                    throw ParseError(name_ + ": channel '" + c.label +
                                     "' references missing state '" + lbl + "'");
                defect -= s->energy0_mhz;
            }
            if (std::abs(defect - c.delta0_mhz) > 1e-6)
                throw ParseError(name_ + ": channel '" + c.label + "': delta0_MHz " +
                                 std::to_string(c.delta0_mhz) +
                                 " inconsistent with member state energies (recomputed " +
                                 std::to_string(defect) + ")");
        }
    }

    std::string_view text_;
    std::string name_;
    std::size_t pos_ = 0;
    int line_no_ = 0;
    std::vector<ParamToken> tokens_;
};

inline std::string g17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string quoted(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace detail

inline ParameterSet parse_parameters(std::string_view text, std::string name = "<string>")
{
    return detail::ParamParser(text, std::move(name)).run();
}

inline ParameterSet load_parameters(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_parameters(ss.str(), path);
}

// Emits the frozen `rff-params 1` grammar; floats at 17 significant digits so
// that parse -> serialize -> parse is the identity.
inline std::string serialize_parameters(const ParameterSet& ps)
{
    std::string out = "format rff-params 1\n";
    for (const auto& s : ps.states) {
        out += "\nstate " + s.label + " {\n";
        out += "  n " + std::to_string(s.n) + "\n";
        out += std::string("  L ") + orbital_letter(s.l) + "\n";
        out += "  J " + detail::g17(s.j) + "\n";
        out += "  abs_mJ " + detail::g17(s.abs_mj) + "\n";
        out += "  energy0_MHz " + detail::g17(s.energy0_mhz) + "\n";
        out += "  alpha_MHz_per_Vcm2 " + detail::g17(s.alpha_mhz_vcm2) + "\n";
        out += "  provenance " + detail::quoted(s.provenance) + "\n";
        out += "}\n";
    }
    for (const auto& c : ps.channels) {
        out += "\nchannel " + c.label + " {\n";
        out += "  initial " + c.initial_labels[0] + " " + c.initial_labels[1] + "\n";
        out += "  final " + c.final_labels[0] + " " + c.final_labels[1] + "\n";
        out += "  delta0_MHz " + detail::g17(c.delta0_mhz) + "\n";
        out += "  C3_MHz_um3 " + detail::g17(c.c3_mhz_um3) + "\n";
        out += "  provenance " + detail::quoted(c.provenance) + "\n";
        out += "}\n";
    }
    return out;
}

inline void save_parameters(const ParameterSet& ps, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error(path + ": cannot open for writing");
    out << serialize_parameters(ps);
}

}  // namespace rff
