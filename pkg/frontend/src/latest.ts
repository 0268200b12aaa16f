// Debounced latest-wins request scheduling: rapid slider moves coalesce
// into one in-flight request, and stale responses never reach the UI.

export interface Scheduled<T> {
  cancel(): void;
}

export class LatestWins<Args, Result> {
  private timer: ReturnType<typeof setTimeout> | null = null;
  private seq = 0;

  constructor(
    private run: (args: Args) => Promise<Result>,
    private deliver: (result: Result, args: Args) => void,
    private onError: (err: unknown) => void = () => {},
    private debounceMs = 30,
  ) {}

  /** Queue a request; earlier queued or in-flight results are dropped. */
  request(args: Args): void {
    if (this.timer !== null) clearTimeout(this.timer);
    const ticket = ++this.seq;
    this.timer = setTimeout(() => {
      this.timer = null;
      this.run(args).then(
        (result) => {
          if (ticket === this.seq) this.deliver(result, args);
        },
        (err) => {
          if (ticket === this.seq) this.onError(err);
        },
      );
    }, this.debounceMs);
  }

  /** Issue immediately, bypassing the debounce window. */
  requestNow(args: Args): Promise<void> {
    if (this.timer !== null) clearTimeout(this.timer);
    const ticket = ++this.seq;
    return this.run(args).then(
      (result) => {
        if (ticket === this.seq) this.deliver(result, args);
      },
      (err) => {
        if (ticket === this.seq) this.onError(err);
      },
    );
  }

  get inFlightTicket(): number {
    return this.seq;
  }
}
