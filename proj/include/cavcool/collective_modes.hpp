#pragma once

#include <vector>

#include <Eigen/Dense>

#include "cavcool/model.hpp"

namespace cavcool {

// Orthogonal rotation from individual atomic displacements to collective
// modes: row 0 is the bright combination the cavity drives, rows 1..N-1 form
// the dark chain that reaches the cavity only through the bright mode.
struct ModeTransform {
    Eigen::MatrixXd t;

    int n_atoms() const { return static_cast<int>(t.rows()); }
};

ModeTransform build_transform(int n_atoms);

// Result of rotating the quadratic (position) form of the trapped array into
// the mode basis and reading the couplings off the rotated matrix.
struct CouplingAudit {
    double eps_rotated = 0.0;       // cavity/bright coupling extracted from the rotation
    double eps_closed_form = 0.0;   // same quantity from the closed formula
    std::vector<double> omega_rotated;      // dark-mode frequencies from the rotation
    std::vector<double> beta_rotated;       // bright/dark couplings from the rotation
    std::vector<double> beta_closed_form;   // same from the closed formula
    double max_dark_cavity = 0.0;   // largest direct cavity coupling to a dark mode
    double max_dark_dark = 0.0;     // largest direct dark-dark coupling
};

// Verifies the structural claims behind the mode picture: the cavity couples
// only to the bright mode, and each dark mode couples only to the bright one
// with the predicted strength.  Throws StructureViolation naming the first
// offending entry.
CouplingAudit transformed_coupling_structure(const DerivedModel& model,
                                             const ArrayGeometry& geom,
                                             const ModeTransform& transform);

} // namespace cavcool
