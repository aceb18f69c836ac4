#ifndef FOLRES_MONRES_HPP
#define FOLRES_MONRES_HPP

#include <string>
#include <vector>

#include "folres/blowup.hpp"
#include "folres/foliation.hpp"

namespace folres {

/// d/dv_1..d/dv_p plus nabla_j = sum_k a_jk w_k d/dw_k.
struct MonomialPresentation {
    int p = 0;
    std::vector<std::vector<Rational>> rows;
    std::vector<std::string> free_names;  // defaults v1..vp
    std::vector<std::string> w_names;     // defaults w1..wm

    int m() const;
    RingPtr ring(int N = 16) const;
    int matrix_rank() const;
};

/// Parses `monomial p=<int> rows=[[...],...] [vars v1..vp w1..wm]`.
MonomialPresentation parse_monomial(const std::string& line, int lineno = 0);
std::string to_string(const MonomialPresentation& M);

Foliation monomial_to_foliation(const MonomialPresentation& M, const RingPtr& ring);
/// Coordinate ideal of the w_k with a nonzero column.
IdealGens smrank_center(const MonomialPresentation& M, const RingPtr& ring);

struct MonresSample {
    std::vector<Rational> point;  // on the cobordism, s last
    std::string label;
    int smrank_before = 0;
    int smrank_after = 0;
    bool terminal = false;
    bool log_smooth = false;
};

struct MonresStep {
    int round = 0;
    MonomialPresentation presentation;
    std::vector<std::string> center;
    bool matrix_preserved = false;
    bool strict_equals_controlled = false;
    std::vector<MonresSample> samples;
};

struct MonresReport {
    std::vector<MonresStep> steps;
    int rounds = 0;
    bool ok = true;
    std::string str() const;
};

/// Blow up the sm-rank center until every sampled chart point is smooth.
MonresReport monomial_resolve(const MonomialPresentation& M, int max_rounds = 16);

}  // namespace folres

#endif
