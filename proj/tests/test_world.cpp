#include <random>

#include <doctest.h>

#include "soar/world.hpp"

using namespace soar;

namespace {

LabeledObstacleEstimate est(std::string label, double dist, int id) {
    return {std::move(label), Vec2(dist + 1.0, 0.0), dist, id};
}

}  // namespace

TEST_CASE("clearance policy lookup") {
    ClearancePolicy p{{{"sports_ball", 0.0}, {"fish", 0.0}}, 1.0};
    CHECK(effective_d0(p, "sports_ball") == 0.0);
    CHECK(effective_d0(p, "fish") == 0.0);
    CHECK(effective_d0(p, "unseen_class") == 1.0);
}

TEST_CASE("selection examples") {
    ClearancePolicy p{{{"sports_ball", 0.0}, {"car", 1.0}}, 1.0};

    std::vector<LabeledObstacleEstimate> none{est("car", 1.2, 1), est("car", 3.0, 2)};
    CHECK_FALSE(nearest_effective_obstacle(none, p));

    std::vector<LabeledObstacleEstimate> ball_and_car{est("sports_ball", 0.1, 1), est("car", 0.8, 2)};
    auto pick = nearest_effective_obstacle(ball_and_car, p);
    REQUIRE(pick);
    CHECK(pick->estimate.source_instance == 2);
    CHECK(pick->d0 == 1.0);

    std::vector<LabeledObstacleEstimate> two_cars{est("car", 0.9, 1), est("car", 0.5, 2)};
    pick = nearest_effective_obstacle(two_cars, p);
    REQUIRE(pick);
    CHECK(pick->estimate.surface_distance == 0.5);
}

TEST_CASE("selection uses per-class intrusion, then distance, then id") {
    ClearancePolicy p{{{"person", 2.0}, {"car", 1.0}}, 1.0};
    // person at 1.2 intrudes 0.8, car at 0.5 intrudes 0.5
    std::vector<LabeledObstacleEstimate> v{est("car", 0.5, 1), est("person", 1.2, 2)};
    CHECK(nearest_effective_obstacle(v, p)->estimate.source_instance == 2);

    // equal intrusion 0.5: smaller distance wins
    std::vector<LabeledObstacleEstimate> tie{est("person", 1.5, 1), est("car", 0.5, 2)};
    CHECK(nearest_effective_obstacle(tie, p)->estimate.source_instance == 2);

    // identical: smaller id wins regardless of order
    std::vector<LabeledObstacleEstimate> same{est("car", 0.5, 9), est("car", 0.5, 4)};
    CHECK(nearest_effective_obstacle(same, p)->estimate.source_instance == 4);

    // boundary counts as inside
    std::vector<LabeledObstacleEstimate> edge{est("car", 1.0, 3)};
    CHECK(nearest_effective_obstacle(edge, p));
}

TEST_CASE("ignorable classes never qualify") {
    ClearancePolicy p{{{"fish", 0.0}}, 1.0};
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dist(0.0, 2.0);
    for (int i = 0; i < 200; ++i) {
        std::vector<LabeledObstacleEstimate> v;
        for (int k = 0; k < 6; ++k) v.push_back(est("fish", k == 0 ? 0.0 : dist(rng), k));
        CHECK_FALSE(nearest_effective_obstacle(v, p));
        v.push_back(est("rock", 0.7, 99));
        const auto pick = nearest_effective_obstacle(v, p);
        REQUIRE(pick);
        CHECK(pick->estimate.class_label == "rock");
    }
}

TEST_CASE("surface distance clamps at zero") {
    ObstacleInstance o{1, "car", Vec2(0, 0), 1.0, std::nullopt};
    CHECK(o.surface_distance(Vec2(3, 0)) == 2.0);
    CHECK(o.surface_distance(Vec2(0.5, 0)) == 0.0);
}

TEST_CASE("waypoint loop motion") {
    ObstacleInstance o{1, "person", Vec2(0, 0), 0.3, WaypointLoop{{Vec2(2, 0), Vec2(2, 2)}, 1.0}};
    CHECK(o.position_at(0.0) == Vec2(0, 0));
    CHECK(o.position_at(1.0).isApprox(Vec2(1, 0)));
    CHECK(o.position_at(3.0).isApprox(Vec2(2, 1)));
    // perimeter 4 + 2*sqrt(2); one full loop returns to the start
    const double period = 4.0 + 2.0 * std::sqrt(2.0);
    CHECK(o.position_at(period).isApprox(Vec2(0, 0), 1e-9));
    CHECK(o.position_at(period + 1.0).isApprox(Vec2(1, 0)));

    std::vector<ObstacleInstance> world{o, ObstacleInstance{2, "rock", Vec2(5, 5), 1.0, std::nullopt}};
    const auto moved = obstacles_at(world, 1.0);
    CHECK(moved[0].center.isApprox(Vec2(1, 0)));
    CHECK(moved[1].center == Vec2(5, 5));
}
