#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace mfc {

// Fixed-capacity sample history, single writer. Once full, each push drops
// the oldest sample.
class RingBuffer {
public:
  explicit RingBuffer(std::size_t capacity) : data_(capacity), capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("ring buffer: capacity must be > 0");
  }

  void push(double value) {
    data_[head_] = value;
    head_ = (head_ + 1) % capacity_;
    if (size_ < capacity_) ++size_;
  }

  bool full() const { return size_ == capacity_; }
  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }

  double latest() const {
    if (size_ == 0) throw std::out_of_range("ring buffer: empty");
    return data_[(head_ + capacity_ - 1) % capacity_];
  }

  // Oldest-first copy of the current contents.
  std::vector<double> ordered() const {
    std::vector<double> out(size_);
    const std::size_t start = full() ? head_ : 0;
    for (std::size_t k = 0; k < size_; ++k)
      out[k] = data_[(start + k) % capacity_];
    return out;
  }

  void clear() {
    head_ = 0;
    size_ = 0;
  }

private:
  std::vector<double> data_;
  std::size_t capacity_ = 0;
  std::size_t head_ = 0;
  std::size_t size_ = 0;
};

} // namespace mfc
