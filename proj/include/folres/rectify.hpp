#ifndef FOLRES_RECTIFY_HPP
#define FOLRES_RECTIFY_HPP

#include <vector>

#include "folres/foliation.hpp"
#include "folres/kernel.hpp"

namespace folres {

/// Coordinates (x1, y^) in which the rescaled derivation becomes d/dx1.
struct RectifiedChart {
    int x1 = -1;
    int budget = 0;
    /// Image of every ambient variable; images[x1] = x1.
    std::vector<Jet> images;
    /// d / d(x1).
    Derivation rescaled;

    RingPtr ring() const { return rescaled.ring; }
    /// Ambient variables written in the rectified coordinates.
    std::vector<Jet> inverse() const;
};

/// y^ = sum_j (-x1)^j / j! d^j(y) for j <= budget, after rescaling d(x1) to 1.
RectifiedChart rectify_coordinate(const Derivation& d, int x1, int budget);

/// Largest k such that d(y^) lies in (x1)^k for every image, up to precision.
int rectification_certificate(const RectifiedChart& chart);

/// Pull a jet on the hyperplane x1 = 0 back along the rectified images.
Jet lift(const RectifiedChart& chart, const Jet& f_on_h);

struct SplitFoliation {
    RectifiedChart chart;
    /// d/dx1 followed by the nabla_j, written in rectified coordinates.
    Foliation gens;
    /// Degree up to which both span inclusions were verified.
    int certified_degree = -1;
    bool certified = false;
};

/// Split F along x1 using the generator combination d with d(x1) a unit.
SplitFoliation split_foliation(const Foliation& F, int x1, const Derivation& d);
/// First generator of F with a unit x1-coefficient.
SplitFoliation split_foliation(const Foliation& F, int x1);

/// nabla(x1) = 0 and [nabla, dx1] = 0 up to truncation.
bool is_independent(const Derivation& nabla, int x1, const Derivation& dx1);

/// Derivation written in new coordinates: coefficient k is d(phi_k) composed
/// with the inverse map.
Derivation change_coordinates(const Derivation& d, const std::vector<Jet>& phi, const std::vector<Jet>& inverse);

}  // namespace folres

#endif
