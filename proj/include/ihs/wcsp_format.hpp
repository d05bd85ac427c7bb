#pragma once

// Reader and writer for the whitespace-separated .wcsp text format:
//
//   name nvars max_dom_size nfunctions top
//   d_1 ... d_nvars
//   arity v_1 ... v_arity default_cost ntuples      (once per function)
//   a_1 ... a_arity cost                             (ntuples lines)
//
// Costs >= top are hard. Arity-0 functions are constants.

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "ihs/model.hpp"

namespace ihs {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line)
    {
    }
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

namespace detail {

class TokenStream {
public:
    explicit TokenStream(std::string_view text) : text_(text) {}

    std::size_t line() const { return line_; }

    bool atEnd()
    {
        skipSpace();
        return pos_ >= text_.size();
    }

    std::string_view word(const char* what)
    {
        skipSpace();
        if (pos_ >= text_.size()) throw ParseError(line_, std::string("unexpected end of input, expected ") + what);
        std::size_t start = pos_;
        while (pos_ < text_.size() && !isSpace(text_[pos_])) ++pos_;
        return text_.substr(start, pos_ - start);
    }

    std::uint64_t number(const char* what)
    {
        std::string_view w = word(what);
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
        if (ec != std::errc{} || ptr != w.data() + w.size())
            throw ParseError(line_, std::string("expected ") + what + ", got '" + std::string(w) + "'");
        return v;
    }

private:
    static bool isSpace(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

    void skipSpace()
    {
        while (pos_ < text_.size() && isSpace(text_[pos_])) {
            if (text_[pos_] == '\n') ++line_;
            ++pos_;
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

}  // namespace detail

/// Parses .wcsp text. Costs >= top become hard constraints; a function whose
/// remaining finite part takes a single cost is folded into offset().
inline WcspInstance parseWcsp(std::string_view text)
{
    detail::TokenStream in(text);
    std::string name(in.word("instance name"));
    const std::uint64_t nvars = in.number("variable count");
    in.number("max domain size");
    const std::uint64_t nfun = in.number("function count");
    const std::size_t headerLine = in.line();
    const Cost top = in.number("top");
    if (top < 1) throw ParseError(headerLine, "top must be positive");

    std::vector<Value> domains(nvars);
    for (auto& d : domains) {
        std::uint64_t v = in.number("domain size");
        if (v == 0) throw ParseError(in.line(), "empty domain");
        d = static_cast<Value>(v);
    }

    std::vector<HardConstraint> hard;
    std::vector<CostFunction> functions;
    Cost offset = 0;

    for (std::uint64_t f = 0; f < nfun; ++f) {
        const std::uint64_t arity = in.number("function arity");
        const std::size_t fline = in.line();
        std::vector<VarId> scope(arity);
        for (auto& x : scope) {
            std::uint64_t v = in.number("scope variable");
            if (v >= nvars) throw ParseError(in.line(), "scope variable " + std::to_string(v) + " out of range");
            x = static_cast<VarId>(v);
        }
        {
            auto sorted = scope;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                throw ParseError(fline, "scope repeats a variable");
        }
        const Cost defaultCost = in.number("default cost");
        const std::uint64_t ntuples = in.number("tuple count");

        std::map<Tuple, Cost> finite;
        std::set<Tuple> forbidden;
        std::set<Tuple> listed;
        for (std::uint64_t k = 0; k < ntuples; ++k) {
            Tuple t(arity);
            for (std::size_t j = 0; j < arity; ++j) {
                std::uint64_t v = in.number("tuple value");
                if (v >= domains[scope[j]])
                    throw ParseError(in.line(), "value " + std::to_string(v) + " out of domain of variable " +
                                                    std::to_string(scope[j]));
                t[j] = static_cast<Value>(v);
            }
            const Cost c = in.number("tuple cost");
            if (!listed.insert(t).second) throw ParseError(in.line(), "duplicate tuple");
            if (c >= top)
                forbidden.insert(std::move(t));
            else
                finite.emplace(std::move(t), c);
        }

        if (arity == 0) {
            // constant function: its value is the default cost
            Cost c = ntuples ? (finite.empty() ? top : finite.begin()->second) : defaultCost;
            if (c >= top)
                hard.push_back(HardConstraint{{}, {Tuple{}}});
            else
                offset += c;
            continue;
        }

        if (defaultCost >= top) {
            // every unlisted tuple is forbidden
            TupleIndexer ix;
            try {
                ix = TupleIndexer(scope, domains);
            } catch (const std::length_error&) {
                throw ParseError(fline, "hard-default function scope too large to enumerate");
            }
            for (std::size_t idx = 0; idx < ix.count(); ++idx) {
                Tuple t = ix.tuple(idx);
                if (!finite.contains(t)) forbidden.insert(std::move(t));
            }
        }
        if (!forbidden.empty()) hard.push_back(HardConstraint{scope, std::move(forbidden)});

        if (defaultCost >= top && finite.empty()) continue;  // purely hard
        Cost base = defaultCost;
        if (defaultCost >= top) {
            base = finite.begin()->second;
            for (const auto& [t, c] : finite) base = std::min(base, c);
        }
        CostFunction fn(scope, base, std::move(finite));
        if (fn.levels().size() == 1)
            offset += fn.minLevel();
        else
            functions.push_back(std::move(fn));
    }
    if (!in.atEnd()) throw ParseError(in.line(), "trailing content after last function");
    return WcspInstance(std::move(name), std::move(domains), std::move(hard), std::move(functions), top, offset);
}

inline std::string writeWcsp(const WcspInstance& w)
{
    std::ostringstream out;
    std::string name = w.name().empty() ? std::string("wcsp") : w.name();
    std::replace_if(name.begin(), name.end(), [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }, '_');

    Value maxDom = 0;
    for (Value d : w.domains()) maxDom = std::max(maxDom, d);
    // an empty-scope constraint forbidding nothing is vacuous and left out
    auto vacuous = [](const HardConstraint& h) { return h.scope.empty() && h.forbidden.empty(); };
    const std::size_t nhard = static_cast<std::size_t>(
        std::count_if(w.hardConstraints().begin(), w.hardConstraints().end(), [&](const auto& h) { return !vacuous(h); }));
    // the offset goes out as constants below top, since a constant >= top reads back as hard
    if (w.offset() > 0 && w.top() == 1) throw std::invalid_argument("offset cannot be written with top 1");
    const Cost chunk = w.top() - 1;
    const std::size_t nconst = w.offset() == 0 ? 0 : static_cast<std::size_t>((w.offset() + chunk - 1) / chunk);
    const std::size_t nfun = nhard + w.numFunctions() + nconst;
    out << name << ' ' << w.numVars() << ' ' << maxDom << ' ' << nfun << ' ' << w.top() << '\n';
    for (std::size_t x = 0; x < w.numVars(); ++x) out << (x ? " " : "") << w.domains()[x];
    out << '\n';

    auto writeScope = [&](const std::vector<VarId>& scope) {
        out << scope.size();
        for (VarId x : scope) out << ' ' << x;
    };
    auto writeTuple = [&](const Tuple& t, Cost c) {
        for (Value v : t) out << v << ' ';
        out << c << '\n';
    };

    for (const auto& h : w.hardConstraints()) {
        if (vacuous(h)) continue;
        if (h.scope.empty()) {
            out << "0 " << w.top() << " 0\n";
            continue;
        }
        writeScope(h.scope);
        out << " 0 " << h.forbidden.size() << '\n';
        for (const auto& t : h.forbidden) writeTuple(t, w.top());
    }
    for (const auto& f : w.costFunctions()) {
        writeScope(f.scope());
        out << ' ' << f.defaultCost() << ' ' << f.tuples().size() << '\n';
        for (const auto& [t, c] : f.tuples()) writeTuple(t, c);
    }
    for (Cost left = w.offset(); left > 0; left -= std::min(left, chunk)) out << "0 " << std::min(left, chunk) << " 0\n";
    return out.str();
}

inline WcspInstance readWcspFile(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parseWcsp(buf.str());
}

inline void writeWcspFile(const std::string& path, const WcspInstance& w)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << writeWcsp(w);
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace ihs
