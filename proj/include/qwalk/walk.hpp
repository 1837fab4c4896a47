#pragma once
#include <array>
#include <string>
#include <utility>

namespace qwalk {

// Nearest-neighbour jump law in the quarter plane, absorbing on both axes.
// p(i,j) is the probability of the jump (i,j), i,j in {-1,0,1}, p(0,0)=0.
class WalkParams {
public:
    struct SkipDriftCheck {}; // tag for test-only fixtures with zero drift

    WalkParams(const std::array<std::array<double, 3>, 3>& p, int n0, int m0);
    WalkParams(const std::array<std::array<double, 3>, 3>& p, int n0, int m0, SkipDriftCheck);

    double p(int i, int j) const { return p_[static_cast<size_t>(i + 1)][static_cast<size_t>(j + 1)]; }
    int n0() const { return n0_; }
    int m0() const { return m0_; }

    double drift_x() const; // sum i*p(i,j)
    double drift_y() const; // sum j*p(i,j)

    // determinant of [[p11,p10,p1-1],[p01,-1,p0-1],[p-11,p-10,p-1-1]];
    // zero exactly when the symmetry group has order four
    double group_determinant() const;

    bool is_diagonal() const; // all mass on the two diagonals

    WalkParams transposed() const; // p(i,j) -> p(j,i), start swapped

    std::string to_json() const;
    static WalkParams from_json(const std::string& text);
    static WalkParams from_json_file(const std::string& path);

    // named fixtures used across the test suite
    static WalkParams simple_cross();       // p10=p01=0.3, p-10=p0-1=0.2, order 4
    static WalkParams order6_zero_drift();  // p-11=p10=p0-1=1/3 (test-only, zero drift)
    static WalkParams order6_drifted();     // same family, drift-positive member
    static WalkParams order6_low();         // p-1-1+p10+p01=1 family, ratio 3/2
    static WalkParams order8();             // p11=p10=0.3, p-1-1=p-10=0.2
    static WalkParams order6_low_drifted(); // drift-positive member of the 3/2 family
    static WalkParams diagonal_fixture();   // mass on the diagonals only

private:
    void validate(bool require_drift) const;
    std::array<std::array<double, 3>, 3> p_{}; // p_[i+1][j+1]
    int n0_ = 1, m0_ = 1;
};

} // namespace qwalk
