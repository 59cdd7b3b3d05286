#include "quadrature.hpp"

#include <stdexcept>

namespace cutheat {

namespace {

QuadRule make_triangle_rule(int degree) {
    QuadRule rule;
    rule.degree = degree;
    auto add_permutations = [&rule](double a, double b, double w) {
        // all distinct permutations of barycentric (a, b, 1-a-b), stored as
        // reference coordinates (x, y) = (bary1, bary2) with bary0 = 1-x-y
        const double c = 1.0 - a - b;
        const std::array<std::array<double, 3>, 6> perms = {
            {{a, b, c}, {a, c, b}, {b, a, c}, {b, c, a}, {c, a, b}, {c, b, a}}};
        std::vector<std::array<double, 3>> seen;
        for (const auto& p : perms) {
            bool dup = false;
            for (const auto& q : seen)
                if (std::abs(p[0] - q[0]) < 1e-15 && std::abs(p[1] - q[1]) < 1e-15) dup = true;
            if (dup) continue;
            seen.push_back(p);
            rule.points.push_back({p[1], p[2]});
            rule.weights.push_back(w * 0.5);  // table weights sum to 1; reference area is 1/2
        }
    };

    switch (degree) {
        case 1:
            add_permutations(1.0 / 3.0, 1.0 / 3.0, 1.0);
            break;
        case 2:
            add_permutations(2.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0);
            break;
        case 3:
        case 4:
            // 6-point degree-4 rule (positive weights, unlike the 4-point degree-3 rule)
            add_permutations(0.445948490915965, 0.445948490915965, 0.223381589678011);
            add_permutations(0.091576213509771, 0.091576213509771, 0.109951743655322);
            break;
        case 5:
            add_permutations(1.0 / 3.0, 1.0 / 3.0, 0.225);
            add_permutations(0.470142064105115, 0.470142064105115, 0.132394152788506);
            add_permutations(0.101286507323456, 0.101286507323456, 0.125939180544827);
            break;
        case 6:
            add_permutations(0.249286745170910, 0.249286745170910, 0.116786275726379);
            add_permutations(0.063089014491502, 0.063089014491502, 0.050844906370207);
            add_permutations(0.310352451033785, 0.053145049844816, 0.082851075618374);
            break;
        default:
            throw std::invalid_argument("triangle quadrature supports degrees 1..6");
    }
    return rule;
}

QuadRule make_gauss_rule(int npoints) {
    // Gauss-Legendre nodes/weights on [-1,1], mapped to [0,1].
    std::vector<double> x, w;
    switch (npoints) {
        case 1:
            x = {0.0};
            w = {2.0};
            break;
        case 2:
            x = {-0.5773502691896257645, 0.5773502691896257645};
            w = {1.0, 1.0};
            break;
        case 3:
            x = {-0.7745966692414833770, 0.0, 0.7745966692414833770};
            w = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
            break;
        case 4:
            x = {-0.8611363115940525752, -0.3399810435848562648, 0.3399810435848562648,
                 0.8611363115940525752};
            w = {0.3478548451374538574, 0.6521451548625461426, 0.6521451548625461426,
                 0.3478548451374538574};
            break;
        case 5:
            x = {-0.9061798459386639928, -0.5384693101056830910, 0.0, 0.5384693101056830910,
                 0.9061798459386639928};
            w = {0.2369268850561890875, 0.4786286704993664680, 0.5688888888888888889,
                 0.4786286704993664680, 0.2369268850561890875};
            break;
        case 6:
            x = {-0.9324695142031520278, -0.6612093864662645137, -0.2386191860831969086,
                 0.2386191860831969086, 0.6612093864662645137, 0.9324695142031520278};
            w = {0.1713244923791703450, 0.3607615730481386076, 0.4679139345726910474,
                 0.4679139345726910474, 0.3607615730481386076, 0.1713244923791703450};
            break;
        default:
            throw std::invalid_argument("1d gauss rule supports 1..6 points");
    }
    QuadRule rule;
    rule.degree = 2 * npoints - 1;
    for (int i = 0; i < npoints; ++i) {
        rule.points.push_back({0.5 * (x[i] + 1.0), 0.0});
        rule.weights.push_back(0.5 * w[i]);
    }
    return rule;
}

}  // namespace

const QuadRule& reference_rule(int degree) {
    if (degree < 1 || degree > 6) throw std::invalid_argument("triangle quadrature supports degrees 1..6");
    static const std::array<QuadRule, 6> rules = {make_triangle_rule(1), make_triangle_rule(2),
                                                  make_triangle_rule(3), make_triangle_rule(4),
                                                  make_triangle_rule(5), make_triangle_rule(6)};
    return rules[degree - 1];
}

const QuadRule& gauss_rule_1d(int npoints) {
    if (npoints < 1 || npoints > 6) throw std::invalid_argument("1d gauss rule supports 1..6 points");
    static const std::array<QuadRule, 6> rules = {make_gauss_rule(1), make_gauss_rule(2),
                                                  make_gauss_rule(3), make_gauss_rule(4),
                                                  make_gauss_rule(5), make_gauss_rule(6)};
    return rules[npoints - 1];
}

CutCellGeometry cut_triangle(const std::array<Vec2, 3>& v, const std::array<double, 3>& phi) {
    CutCellGeometry geo;
    std::array<bool, 3> neg{};
    int n_neg = 0;
    for (int i = 0; i < 3; ++i) {
        neg[i] = phi[i] <= 0.0;  // zero counts as inside
        if (neg[i]) ++n_neg;
    }

    if (n_neg == 0) return geo;
    if (n_neg == 3) {
        geo.interior_subtris.push_back(v);
        return geo;
    }

    // gradient of the linear interpolant of phi; its direction is the
    // interface normal (negative to positive side)
    const Vec2 e1 = v[1] - v[0], e2 = v[2] - v[0];
    const double det = cross(e1, e2);
    const Vec2 grad{(phi[1] - phi[0]) * e2.y - (phi[2] - phi[0]) * e1.y,
                    -(phi[1] - phi[0]) * e2.x + (phi[2] - phi[0]) * e1.x};
    const Vec2 g = grad / det;
    const double gn = norm(g);

    auto edge_cut = [&](int a, int b) {
        const double t = phi[a] / (phi[a] - phi[b]);
        return v[a] + t * (v[b] - v[a]);
    };
    auto push_tri = [&geo](const Vec2& a, const Vec2& b, const Vec2& c) {
        const double area = triangle_area(a, b, c);
        const double scale = std::max({dist(a, b), dist(b, c), dist(c, a)});
        if (scale <= 0.0 || std::abs(area) < 1e-14 * scale * scale) return;
        if (area > 0.0)
            geo.interior_subtris.push_back({a, b, c});
        else
            geo.interior_subtris.push_back({a, c, b});
    };

    if (n_neg == 1) {
        int i = 0;
        while (!neg[i]) ++i;
        const int j = (i + 1) % 3, k = (i + 2) % 3;
        const Vec2 pij = edge_cut(i, j), pik = edge_cut(i, k);
        push_tri(v[i], pij, pik);
        if (gn > 0.0 && dist(pij, pik) > 0.0)
            geo.boundary_segments.push_back({pij, pik, g / gn});
    } else {  // n_neg == 2
        int k = 0;
        while (neg[k]) ++k;
        const int i = (k + 1) % 3, j = (k + 2) % 3;  // both negative
        const Vec2 pjk = edge_cut(j, k), pik = edge_cut(i, k);
        // interior quad (v_i, v_j, p_jk, p_ik), split along its first diagonal
        push_tri(v[i], v[j], pjk);
        push_tri(v[i], pjk, pik);
        if (gn > 0.0 && dist(pjk, pik) > 0.0)
            geo.boundary_segments.push_back({pjk, pik, g / gn});
    }
    return geo;
}

double integrate_subtris(const CutCellGeometry& geo, const QuadRule& rule,
                         const std::function<double(const Vec2&)>& f) {
    double sum = 0.0;
    for (const auto& t : geo.interior_subtris) {
        const Vec2 e1 = t[1] - t[0], e2 = t[2] - t[0];
        const double jac = cross(e1, e2);  // = 2 * area
        for (size_t q = 0; q < rule.points.size(); ++q) {
            const Vec2 x = t[0] + rule.points[q].x * e1 + rule.points[q].y * e2;
            sum += rule.weights[q] * jac * f(x);
        }
    }
    return sum;
}

double integrate_segments(const CutCellGeometry& geo, const QuadRule& rule,
                          const std::function<double(const Vec2&, const Vec2&)>& f) {
    double sum = 0.0;
    for (const auto& s : geo.boundary_segments) {
        const double len = dist(s.a, s.b);
        for (size_t q = 0; q < rule.points.size(); ++q) {
            const Vec2 x = s.a + rule.points[q].x * (s.b - s.a);
            sum += rule.weights[q] * len * f(x, s.normal);
        }
    }
    return sum;
}

}  // namespace cutheat
