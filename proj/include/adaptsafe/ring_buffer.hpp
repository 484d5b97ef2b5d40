#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace adaptsafe {

/// Fixed-capacity FIFO. Pushing onto a full buffer evicts the oldest element.
/// Index 0 is the oldest retained element.
template <class T>
class RingBuffer {
 public:
  RingBuffer() = default;
  explicit RingBuffer(std::size_t capacity) : slots_(capacity) {
    if (capacity == 0) throw std::invalid_argument("RingBuffer capacity must be positive");
  }

  std::size_t capacity() const noexcept { return slots_.size(); }
  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  bool full() const noexcept { return size_ == slots_.size(); }

  /// Returns the evicted element, if any.
  std::optional<T> push_back(T value) {
    std::optional<T> evicted;
    if (full()) {
      evicted = std::move(slots_[head_]);
      slots_[head_] = std::move(value);
      head_ = (head_ + 1) % slots_.size();
    } else {
      slots_[(head_ + size_) % slots_.size()] = std::move(value);
      ++size_;
    }
    return evicted;
  }

  const T& operator[](std::size_t i) const { return slots_[(head_ + i) % slots_.size()]; }
  const T& front() const { return (*this)[0]; }
  const T& back() const { return (*this)[size_ - 1]; }

  void clear() noexcept {
    head_ = 0;
    size_ = 0;
  }

  /// Copies the retained elements, oldest first.
  std::vector<T> to_vector() const {
    std::vector<T> out;
    out.reserve(size_);
    for (std::size_t i = 0; i < size_; ++i) out.push_back((*this)[i]);
    return out;
  }

  /// Copies the newest `count` elements (or fewer), oldest first.
  std::vector<T> tail(std::size_t count) const {
    const std::size_t n = count < size_ ? count : size_;
    std::vector<T> out;
    out.reserve(n);
    for (std::size_t i = size_ - n; i < size_; ++i) out.push_back((*this)[i]);
    return out;
  }

  friend bool operator==(const RingBuffer& a, const RingBuffer& b) {
    if (a.capacity() != b.capacity() || a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!(a[i] == b[i])) return false;
    return true;
  }

 private:
  std::vector<T> slots_;
  std::size_t head_ = 0;
  std::size_t size_ = 0;
};

}  // namespace adaptsafe
