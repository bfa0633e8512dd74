#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "gippo/errors.hpp"
#include "gippo/fmtnum.hpp"
#include "gippo/geometry.hpp"
#include "gippo/rng.hpp"

using namespace gippo;

TEST_SUITE("geometry") {

TEST_CASE("dist3 is the euclidean norm") {
    CHECK(dist3({0, 0, 0}, {3, 4, 0}) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(dist3({1, 2, 3}, {1, 2, 3}) == 0.0);
    CHECK(dist3({0, 0, 0}, {1, 2, 2}) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("weld merges points within tolerance") {
    std::vector<Point3> pts = {{0, 0, 0}, {1, 0, 0}, {1.0 + 4e-7, 0, 0}, {2, 0, 0}};
    std::vector<Segment> segs = {{0, 1}, {2, 3}};
    Layer l = weld_layer(pts, segs, 0.0, "t", {1e-6, false});
    CHECK(l.points.size() == 3);
    CHECK(l.segments.size() == 2);
    // the two middle points became one shared node
    CHECK(l.segments[0].b == l.segments[1].a);
}

TEST_CASE("weld keeps points separated by more than the tolerance") {
    std::vector<Point3> pts = {{0, 0, 0}, {2e-6, 0, 0}};
    std::vector<Segment> segs = {{0, 1}};
    Layer l = weld_layer(pts, segs, 0.0, "t", {1e-6, false});
    CHECK(l.points.size() == 2);
    CHECK(l.segments.size() == 1);
}

TEST_CASE("weld on a 2x2 grid of unit cells leaves 9 points and 12 segments") {
    // four unit squares, each with its own copies of the corner points
    std::vector<Point3> pts;
    std::vector<Segment> segs;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const int base = static_cast<int>(pts.size());
            const double x = i, y = j;
            pts.push_back({x, y, 0});
            pts.push_back({x + 1, y, 0});
            pts.push_back({x + 1, y + 1, 0});
            pts.push_back({x, y + 1, 0});
            for (int k = 0; k < 4; ++k) segs.push_back({base + k, base + (k + 1) % 4});
        }
    }
    Layer l = weld_layer(pts, segs, 0.0, "grid", {1e-6, false});
    CHECK(l.points.size() == 9);
    CHECK(l.segments.size() == 12);  // 8 boundary edges + 4 interior, shared edges deduped
    CHECK(l.total_length() == doctest::Approx(12.0).epsilon(1e-12));
}

TEST_CASE("weld drops segments that collapse to a point") {
    std::vector<Point3> pts = {{0, 0, 0}, {1e-9, 0, 0}, {1, 0, 0}};
    std::vector<Segment> segs = {{0, 1}, {0, 2}};
    Layer l = weld_layer(pts, segs, 0.0, "t", {1e-6, false});
    CHECK(l.points.size() == 2);
    CHECK(l.segments.size() == 1);

    CHECK_THROWS_AS(weld_layer(pts, segs, 0.0, "t", WeldOptions{1e-6, true}), FormatError);
}

TEST_CASE("weld drops unreferenced points") {
    std::vector<Point3> pts = {{0, 0, 0}, {5, 5, 0}, {1, 0, 0}};
    std::vector<Segment> segs = {{0, 2}};
    Layer l = weld_layer(pts, segs, 0.0, "t", {1e-6, false});
    CHECK(l.points.size() == 2);
    CHECK(l.points[1].x == 1.0);
}

TEST_CASE("weld rejects out-of-range segment indices") {
    std::vector<Point3> pts = {{0, 0, 0}, {1, 0, 0}};
    CHECK_THROWS_AS(weld_layer(pts, {{0, 7}}, 0.0, "t", {1e-6, false}), FormatError);
    CHECK_THROWS_AS(weld_layer(pts, {{-1, 1}}, 0.0, "t", {1e-6, false}), FormatError);
}

TEST_CASE("weld rejects non-finite coordinates and bad tolerance") {
    std::vector<Point3> pts = {{0, 0, 0}, {std::nan(""), 0, 0}};
    CHECK_THROWS_AS(weld_layer(pts, {{0, 1}}, 0.0, "t", {1e-6, false}), FormatError);
    std::vector<Point3> ok = {{0, 0, 0}, {1, 0, 0}};
    CHECK_THROWS_AS(weld_layer(ok, {{0, 1}}, 0.0, "t", {0.0, false}), ParamError);
}

TEST_CASE("validate_layer flags structural defects") {
    Layer good;
    good.points = {{0, 0, 0}, {1, 0, 0}};
    good.segments = {{0, 1}};
    CHECK_NOTHROW(validate_layer(good));

    Layer oob = good;
    oob.segments = {{0, 5}};
    CHECK_THROWS_AS(validate_layer(oob), StructuralError);

    Layer loop = good;
    loop.segments = {{1, 1}};
    CHECK_THROWS_AS(validate_layer(loop), StructuralError);

    Layer dup = good;
    dup.segments = {{0, 1}, {1, 0}};
    CHECK_THROWS_AS(validate_layer(dup), StructuralError);

    Layer sliver;
    sliver.points = {{0, 0, 0}, {1e-9, 0, 0}};
    sliver.segments = {{0, 1}};
    CHECK_THROWS_AS(validate_layer(sliver), StructuralError);
}

TEST_CASE("rect clip cuts a crossing segment at the boundary") {
    Contour c = Contour::rect(2.0, 2.0);
    auto r = c.clip_segment({-2, 0, 0}, {2, 0, 0});
    REQUIRE(r.has_value());
    CHECK(r->first.x == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(r->second.x == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r->first.y == 0.0);

    CHECK_FALSE(c.clip_segment({-3, 5, 0}, {3, 5, 0}).has_value());
}

TEST_CASE("circle clip solves the chord analytically") {
    Contour c = Contour::circle(0.5);
    auto r = c.clip_segment({-1, 0, 0}, {1, 0, 0});
    REQUIRE(r.has_value());
    CHECK(r->first.x == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(r->second.x == doctest::Approx(0.5).epsilon(1e-12));

    // chord at height h has half-length sqrt(r^2 - h^2)
    auto r2 = c.clip_segment({-1, 0.3, 0}, {1, 0.3, 0});
    REQUIRE(r2.has_value());
    CHECK(r2->second.x == doctest::Approx(0.4).epsilon(1e-12));

    CHECK_FALSE(c.clip_segment({-1, 0.6, 0}, {1, 0.6, 0}).has_value());
}

TEST_CASE("clip keeps interior segments bit-identical") {
    Contour rect = Contour::rect(10, 10);
    Contour circ = Contour::circle(5);
    const Point3 p{0.1 + 1e-13, -2.3456789, 0.0};
    const Point3 q{2.999999999, 3.2, 0.0};  // inside the rect and the circle
    for (const Contour& c : {rect, circ}) {
        auto r = c.clip_segment(p, q);
        REQUIRE(r.has_value());
        CHECK(r->first.x == p.x);
        CHECK(r->first.y == p.y);
        CHECK(r->second.x == q.x);
        CHECK(r->second.y == q.y);
    }
}

TEST_CASE("clipping a clipped segment changes nothing") {
    Rng rng(99);
    auto coord = [&] {
        return -8.0 + 16.0 * (static_cast<double>(rng.next() >> 11) * 0x1.0p-53);
    };
    Contour rect = Contour::rect(7.0, 5.0, 0.5, -0.25);
    Contour circ = Contour::circle(4.0, -1.0, 2.0);
    int clipped = 0;
    for (int i = 0; i < 500; ++i) {
        const Point3 p{coord(), coord(), 0.0};
        const Point3 q{coord(), coord(), 0.0};
        for (const Contour& c : {rect, circ}) {
            auto once = c.clip_segment(p, q);
            if (!once) continue;
            // snap to interchange precision, as the generators do
            Point3 a{quantize_g9(once->first.x), quantize_g9(once->first.y), 0.0};
            Point3 b{quantize_g9(once->second.x), quantize_g9(once->second.y), 0.0};
            auto twice = c.clip_segment(a, b);
            REQUIRE(twice.has_value());
            CHECK(twice->first.x == a.x);
            CHECK(twice->first.y == a.y);
            CHECK(twice->second.x == b.x);
            CHECK(twice->second.y == b.y);
            ++clipped;
        }
    }
    CHECK(clipped > 200);  // the window actually exercised both contours
}

TEST_CASE("contour parameter validation") {
    CHECK_THROWS_AS(Contour::rect(0.0, 1.0), ParamError);
    CHECK_THROWS_AS(Contour::rect(1.0, -2.0), ParamError);
    CHECK_THROWS_AS(Contour::circle(0.0), ParamError);
}

TEST_CASE("quantize_layer is idempotent") {
    std::vector<Point3> pts = {{0.1 + 1e-14, 0, 0},
                               {1.0 / 3.0, 2.0 / 7.0, 0},
                               {-0.0, 1.25, 0}};
    std::vector<Segment> segs = {{0, 1}, {1, 2}};
    Layer base = weld_layer(pts, segs, 0.0, "q", {1e-6, false});
    Layer once = quantize_layer(base);
    Layer twice = quantize_layer(once);
    REQUIRE(once.points.size() == twice.points.size());
    for (std::size_t i = 0; i < once.points.size(); ++i) {
        CHECK(once.points[i].x == twice.points[i].x);
        CHECK(once.points[i].y == twice.points[i].y);
        CHECK(once.points[i].z == twice.points[i].z);
    }
    REQUIRE(once.segments.size() == twice.segments.size());
    for (std::size_t i = 0; i < once.segments.size(); ++i) {
        CHECK(once.segments[i].a == twice.segments[i].a);
        CHECK(once.segments[i].b == twice.segments[i].b);
    }
    // -0 collapses to +0
    for (const auto& p : once.points) {
        const bool negative_zero = std::signbit(p.x) && p.x == 0.0;
        CHECK_FALSE(negative_zero);
    }
}

TEST_CASE("quantize_layer numbering depends only on geometry") {
    std::vector<Point3> pts = {{2, 0, 0}, {0, 0, 0}, {1, 1, 0}};
    std::vector<Segment> segs = {{0, 2}, {2, 1}};
    Layer a = quantize_layer(weld_layer(pts, segs, 0.0, "p", {1e-6, false}));

    // same geometry, different construction order
    std::vector<Point3> pts2 = {{1, 1, 0}, {2, 0, 0}, {0, 0, 0}};
    std::vector<Segment> segs2 = {{2, 0}, {0, 1}};
    Layer b = quantize_layer(weld_layer(pts2, segs2, 0.0, "p", {1e-6, false}));

    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i].x == b.points[i].x);
        CHECK(a.points[i].y == b.points[i].y);
    }
    REQUIRE(a.segments.size() == b.segments.size());
    for (std::size_t i = 0; i < a.segments.size(); ++i) {
        CHECK(a.segments[i].a == b.segments[i].a);
        CHECK(a.segments[i].b == b.segments[i].b);
    }
    // points come out sorted by (x, y, z)
    for (std::size_t i = 1; i < a.points.size(); ++i) {
        const auto& p = a.points[i - 1];
        const auto& q = a.points[i];
        CHECK((p.x < q.x || (p.x == q.x && (p.y < q.y || (p.y == q.y && p.z <= q.z)))));
    }
}

TEST_CASE("flat height field returns its level everywhere") {
    HeightField hf = HeightField::flat(1.5);
    auto v = hf.sample(100.0, -3.0);
    REQUIRE(v.has_value());
    CHECK(*v == 1.5);
}

TEST_CASE("spherical cap height matches the closed form") {
    // sphere radius 10 centered at z = -10: apex touches z = 0
    HeightField hf = HeightField::spherical_cap(10.0, -10.0);
    auto apex = hf.sample(0.0, 0.0);
    REQUIRE(apex.has_value());
    CHECK(*apex == doctest::Approx(0.0).epsilon(1e-12));

    auto v = hf.sample(3.0, 4.0);  // r = 5, z = sqrt(100 - 25) - 10
    REQUIRE(v.has_value());
    CHECK(*v == doctest::Approx(std::sqrt(75.0) - 10.0).epsilon(1e-12));

    CHECK_FALSE(hf.sample(11.0, 0.0).has_value());
    CHECK_THROWS_AS(HeightField::spherical_cap(0.0, 0.0), ParamError);
}

TEST_CASE("number formatting is stable and round-trips") {
    CHECK(fmt_g9(0.1) == "0.1");
    CHECK(fmt_g9(-0.0) == "0");
    CHECK(fmt_g9(1.0) == "1");
    CHECK(fmt_g9(10000000000.0) == "1e+10");

    CHECK(fmt_fixed(1.375, 5) == "1.37500");
    CHECK(fmt_fixed(-1e-9, 5) == "0.00000");  // no negative zero in output

    const double pi = 3.14159265358979323846;
    const double q = quantize_g9(pi);
    CHECK(quantize_g9(q) == q);
    CHECK(q == doctest::Approx(pi).epsilon(1e-9));
}

}  // TEST_SUITE
