#pragma once

#include <array>
#include <cstddef>

namespace exbound::detail {

using FaceKey = std::array<std::size_t, 3>;

// Local faces of a positively oriented tet, outward oriented; face j is
// opposite local vertex j.
inline constexpr std::array<std::array<int, 3>, 4> kTetFaces = {
    {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}}};

// Local edges of a tet in the order used for degree-2 edge nodes.
inline constexpr std::array<std::array<int, 2>, 6> kTetEdges = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

FaceKey make_face_key(std::size_t a, std::size_t b, std::size_t c);

}  // namespace exbound::detail
