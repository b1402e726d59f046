#pragma once
// Discrete-event kernel: integer-picosecond timeline, deterministic event
// queue, clock domains, trace collection, and the two-flop synchronizer
// model used at every synchronous/asynchronous boundary.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace nocsim {

using SimTime = std::uint64_t;  // picoseconds

// Raised when the model itself misbehaves (scheduling in the past, protocol
// violations between components). Never raised by well-formed scenarios.
class ModelBugError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct ClockDomain {
  std::string id;
  std::uint64_t period = 40000;  // 25 MHz default
  std::uint64_t phase = 0;       // first rising edge; phase < period

  // Smallest phase + k*period strictly greater than t.
  SimTime next_edge_after(SimTime t) const;
  SimTime second_edge_after(SimTime t) const;
};

// Time at which `dest` observes a level change that happened at `changed_at`:
// the second destination rising edge strictly after the change.
SimTime cdc_synchronize(const ClockDomain& dest, SimTime changed_at);

enum class TraceKind : std::uint8_t {
  StateChange,
  FlitTransfer,
  HandshakeEdge,
  WbEdge,
  Drop,
  Retransmit,
};
const char* trace_kind_name(TraceKind k);

using ComponentId = std::uint32_t;

struct TraceRecord {
  SimTime time = 0;
  ComponentId component = 0;
  TraceKind kind = TraceKind::StateChange;
  std::string detail;  // space-separated key=value pairs
};

// Collects trace records in firing order. A 64-bit FNV-1a digest over the
// canonical line encoding is always maintained; storing lines, streaming
// them, and feeding a callback sink are all optional.
class Tracer {
 public:
  ComponentId register_component(std::string name);
  const std::string& component_name(ComponentId id) const;

  void emit(SimTime t, ComponentId c, TraceKind k, std::string detail);

  std::uint64_t hash() const { return hash_; }
  std::uint64_t record_count() const { return count_; }

  void set_sink(std::function<void(const TraceRecord&)> sink) { sink_ = std::move(sink); }
  void set_stream(std::ostream* os) { stream_ = os; }
  void set_store(bool on) { store_on_ = on; }
  const std::vector<TraceRecord>& stored() const { return store_; }

  // Canonical line: "<time>\t<component>\t<kind>\t<detail>\n".
  std::string format_line(const TraceRecord& r) const;

 private:
  std::vector<std::string> names_;
  std::vector<TraceRecord> store_;
  std::function<void(const TraceRecord&)> sink_;
  std::ostream* stream_ = nullptr;
  bool store_on_ = false;
  std::uint64_t hash_;
  std::uint64_t count_ = 0;
  SimTime last_time_ = 0;

 public:
  Tracer();
};

// Deterministic event queue. Events fire in (fire_at, seq) order; seq is
// insertion order, so equal-time events fire first-scheduled-first.
class Scheduler {
 public:
  using Callback = std::function<void()>;

  struct Handle {
    std::uint64_t seq = 0;
    bool valid = false;
  };

  Handle schedule(SimTime fire_at, Callback cb);
  Handle schedule_in(std::uint64_t delay, Callback cb) { return schedule(now_ + delay, std::move(cb)); }
  void cancel(Handle h);

  // Fires every event with fire_at <= t_end (including cascades); returns the
  // number fired. Current time tracks the last fired event, not t_end.
  std::size_t run_until(SimTime t_end);

  SimTime now() const { return now_; }
  bool empty() const { return live_ == 0; }

 private:
  struct Event {
    SimTime fire_at;
    std::uint64_t seq;
    std::shared_ptr<Callback> cb;
  };
  struct After {
    bool operator()(const Event& a, const Event& b) const {
      if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
      return a.seq > b.seq;
    }
  };

  std::priority_queue<Event, std::vector<Event>, After> queue_;
  std::unordered_set<std::uint64_t> cancelled_;
  std::uint64_t next_seq_ = 0;
  std::uint64_t live_ = 0;
  SimTime now_ = 0;
};

// Two-flop synchronizer for one binary level crossing into `dest`. Output
// changes commit at the second destination edge strictly after the input
// change; changes arriving faster than one destination period are queued
// onto consecutive edges, never reordered or lost.
class SyncSignal {
 public:
  SyncSignal(Scheduler& sched, Tracer& tracer, ComponentId id, ClockDomain dest,
             bool initial = false);

  void input_change(bool level);  // at sched.now(); level must toggle
  bool input_level() const { return input_; }

  // Committed output level at time t (changes committed exactly at t are
  // visible). Sample times must be non-decreasing.
  bool sample(SimTime t);

 private:
  struct Change {
    SimTime at;
    bool level;
  };

  Scheduler& sched_;
  Tracer& tracer_;
  ComponentId id_;
  ClockDomain dest_;
  std::vector<Change> timeline_;
  std::size_t cursor_ = 0;
  bool input_;
  bool output_;
};

}  // namespace nocsim
