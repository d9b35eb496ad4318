#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ern/errors.hpp"
#include "ern/types.hpp"

namespace ern {

// Bounded circular queue of evidence records. When full, a push evicts the
// oldest record; references to it then dangle and fail find(). Serials start
// at 1 and grow monotonically, so slot reuse never resurrects a stale ref.
class RecordQueue {
 public:
  RecordQueue() = default;
  explicit RecordQueue(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) throw ValidationError("queue capacity must be >= 1");
    slots_.reserve(capacity_);
  }

  struct PushResult {
    std::size_t slot = 0;
    std::uint64_t serial = 0;
    bool evicted = false;
    std::uint64_t evicted_serial = 0;
  };

  PushResult push(EvidenceRecord rec) {
    if (capacity_ == 0) throw ContractError("push into zero-capacity queue");
    PushResult res;
    rec.serial = next_serial_++;
    res.serial = rec.serial;
    if (count_ < capacity_) {
      res.slot = (head_ + count_) % capacity_;
      if (slots_.size() < capacity_) {
        slots_.push_back(std::move(rec));
      } else {
        slots_[res.slot] = std::move(rec);
      }
      ++count_;
    } else {
      res.evicted = true;
      res.evicted_serial = slots_[head_].serial;
      res.slot = head_;
      slots_[head_] = std::move(rec);
      head_ = (head_ + 1) % capacity_;
    }
    return res;
  }

  bool empty() const { return count_ == 0; }
  std::size_t size() const { return count_; }
  std::size_t capacity() const { return capacity_; }

  // Oldest-first access; index 0 is the oldest live record.
  const EvidenceRecord& at(std::size_t i) const {
    if (i >= count_) throw NotFoundError("queue index out of range");
    return slots_[(head_ + i) % capacity_];
  }

  EvidenceRecord* most_recent() {
    return count_ == 0
               ? nullptr
               : &slots_[(head_ + count_ - 1) % capacity_];
  }
  const EvidenceRecord* most_recent() const {
    return const_cast<RecordQueue*>(this)->most_recent();
  }

  EvidenceRecord* find(std::uint64_t serial) {
    for (std::size_t i = 0; i < count_; ++i) {
      EvidenceRecord& r = slots_[(head_ + i) % capacity_];
      if (r.serial == serial) return &r;
    }
    return nullptr;
  }
  const EvidenceRecord* find(std::uint64_t serial) const {
    return const_cast<RecordQueue*>(this)->find(serial);
  }

 private:
  std::vector<EvidenceRecord> slots_;
  std::size_t capacity_ = 0;
  std::size_t head_ = 0;   // physical index of the oldest record
  std::size_t count_ = 0;
  std::uint64_t next_serial_ = 1;
};

}  // namespace ern
