#pragma once

#include <map>
#include <memory>
#include <mutex>

namespace damkit {

/// Map whose values are computed at most once per key, even under concurrent
/// first access. References stay valid for the lifetime of the map.
template <class Key, class Value>
class OnceMap {
 public:
  template <class Compute>
  const Value& get(const Key& key, Compute&& compute) {
    Slot* slot;
    {
      std::lock_guard lock(mutex_);
      auto& p = slots_[key];
      if (!p) p = std::make_unique<Slot>();
      slot = p.get();
    }
    std::call_once(slot->once, [&] { slot->value = std::make_unique<Value>(compute()); });
    return *slot->value;
  }

  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return slots_.size();
  }

  void clear() {
    std::lock_guard lock(mutex_);
    slots_.clear();
  }

 private:
  struct Slot {
    std::once_flag once;
    std::unique_ptr<Value> value;
  };
  mutable std::mutex mutex_;
  std::map<Key, std::unique_ptr<Slot>> slots_;
};

}  // namespace damkit
