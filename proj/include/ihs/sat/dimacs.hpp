#pragma once

// DIMACS CNF import/export, mainly for dumping encodings while debugging.

#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ihs/sat/solver.hpp"

namespace ihs::sat {

struct Cnf {
    std::size_t numVars = 0;
    std::vector<std::vector<Lit>> clauses;
};

inline Lit fromDimacs(long v) { return Lit(static_cast<Var>(std::labs(v) - 1), v < 0); }

inline long toDimacs(Lit l) { return (l.negated() ? -1L : 1L) * (static_cast<long>(l.var()) + 1); }

inline Cnf readDimacs(std::istream& in)
{
    Cnf cnf;
    std::string line;
    std::vector<Lit> current;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 'c' || line[0] == '%') continue;
        std::istringstream ls(line);
        if (line[0] == 'p') {
            std::string p, fmt;
            std::size_t nc = 0;
            ls >> p >> fmt >> cnf.numVars >> nc;
            if (fmt != "cnf") throw std::runtime_error("dimacs: expected 'p cnf' header");
            continue;
        }
        long v = 0;
        while (ls >> v) {
            if (v == 0) {
                cnf.clauses.push_back(std::move(current));
                current.clear();
            } else {
                Lit l = fromDimacs(v);
                if (l.var() >= cnf.numVars) cnf.numVars = l.var() + 1;
                current.push_back(l);
            }
        }
    }
    if (!current.empty()) cnf.clauses.push_back(std::move(current));
    return cnf;
}

inline void writeDimacs(std::ostream& out, const Cnf& cnf)
{
    out << "p cnf " << cnf.numVars << ' ' << cnf.clauses.size() << '\n';
    for (const auto& c : cnf.clauses) {
        for (Lit l : c) out << toDimacs(l) << ' ';
        out << "0\n";
    }
}

inline void load(Solver& s, const Cnf& cnf)
{
    while (s.numVars() < cnf.numVars) s.newVar();
    for (const auto& c : cnf.clauses) s.addClause(c);
}

}  // namespace ihs::sat
