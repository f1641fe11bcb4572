#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "secord/network.hpp"

namespace secord {

/// Undo log for value and tuple deletions. Frames nest strictly; popping a frame
/// puts the network back in exactly the state it had when the frame was pushed.
class Trail {
  public:
    struct Entry {
        enum class Kind : unsigned char { value, tuple } kind;
        int owner;         ///< variable for value entries, constraint for tuple entries
        std::size_t item;  ///< value, or tuple index
    };

    void push(const ConstraintNetwork &network);
    void pop(ConstraintNetwork &network);
    std::size_t depth() const { return frames_.size(); }

    /// Deletions recorded since the top frame was pushed, in deletion order.
    std::span<const Entry> top_frame() const;

    void record_value(VarId x, Value a);
    void record_tuple(ConstraintId c, std::size_t index);

  private:
    struct Frame {
        std::size_t start;
        bool failed;
    };
    std::vector<Entry> entries_;
    std::vector<Frame> frames_;
};

} // namespace secord
