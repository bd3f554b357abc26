#pragma once
// Built-in maps. The default world is a 35x35 four-room layout whose dividers
// attach to the outer border and leave wide central passages: wall ends (the
// spots shortest paths bend around, and the spots a greedy controller gets
// stuck on) stay away from the bulk of the traffic. two_room is a small
// fixture whose rooms are separated by a thin wall with a long way around, so
// straight-line and shortest-path distances diverge sharply across the wall.

#include <string_view>

namespace planlab::maps {

inline constexpr std::string_view kDefault =
    "###################################\n"
    "#................#................#\n"
    "#................#................#\n"
    "#................#................#\n"
    "#................#................#\n"
    "#................#................#\n"
    "#.................................#\n"
    "#.................................#\n"
    "#.................................#\n"
    "#.................................#\n"
    "#.................................#\n"
    "#.................................#\n"
    "#.................................#\n"
    "#.................................#\n"
    "#.................................#\n"
    "#.................................#\n"
    "#.................................#\n"
    "######.......................######\n"
    "#.................................#\n"
    "#.................................#\n"
    "#.................................#\n"
    "#.................................#\n"
    "#.................................#\n"
    "#.................................#\n"
    "#.................................#\n"
    "#.................................#\n"
    "#.................................#\n"
    "#.................................#\n"
    "#.................................#\n"
    "#................#................#\n"
    "#................#................#\n"
    "#................#................#\n"
    "#................#................#\n"
    "#................#................#\n"
    "###################################\n";

inline constexpr std::string_view kTwoRoom =
    "#################\n"
    "#...............#\n"
    "#.......#.......#\n"
    "#.......#.......#\n"
    "#.......#.......#\n"
    "#.......#.......#\n"
    "#.......#.......#\n"
    "#.......#.......#\n"
    "#.......#.......#\n"
    "#################\n";

}  // namespace planlab::maps
