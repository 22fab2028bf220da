// Rating-flow state machine: one photo at a time, first-impression score,
// advance on ack. Network failures keep the pending score for a retry;
// duplicate submissions are blocked client-side.

import { Api, ApiError, NextPhoto } from "./api.js";

export const MIN_SCORE = 1;
export const MAX_SCORE = 10;

export function isValidScore(score: number): boolean {
  return Number.isInteger(score) && score >= MIN_SCORE && score <= MAX_SCORE;
}

export type FlowState =
  | { kind: "loading" }
  | { kind: "rating"; photo: NextPhoto }
  | { kind: "submitting"; photo: NextPhoto; score: number }
  | { kind: "retry"; photo: NextPhoto; pendingScore: number; message: string }
  | { kind: "done" }
  | { kind: "failed"; message: string };

export type RatingApi = Pick<Api, "next" | "submitRating">;

export class RatingFlow {
  private state: FlowState = { kind: "loading" };
  private readonly acked = new Set<string>();
  ratedCount = 0;

  constructor(
    private readonly api: RatingApi,
    readonly rater: string,
    private readonly onChange: (state: FlowState) => void = () => {}
  ) {}

  getState(): FlowState {
    return this.state;
  }

  private setState(state: FlowState): void {
    this.state = state;
    this.onChange(state);
  }

  async start(): Promise<void> {
    await this.advance();
  }

  private async advance(): Promise<void> {
    this.setState({ kind: "loading" });
    try {
      const photo = await this.api.next(this.rater);
      this.setState(photo === null ? { kind: "done" } : { kind: "rating", photo });
    } catch (error) {
      this.setState({ kind: "failed", message: describe(error) });
    }
  }

  /**
   * Submit the score for the photo on screen. Scores outside 1..10 are
   * rejected before any request; repeated submissions for an already
   * acknowledged photo are ignored.
   */
  async submit(score: number): Promise<void> {
    const state = this.state;
    if (state.kind !== "rating" && state.kind !== "retry") return;
    if (!isValidScore(score)) {
      throw new RangeError(`score must be an integer in ${MIN_SCORE}..${MAX_SCORE}`);
    }
    const photo = state.photo;
    if (this.acked.has(photo.photo_id)) return;
    this.setState({ kind: "submitting", photo, score });
    try {
      await this.api.submitRating(photo.photo_id, this.rater, score);
      this.acked.add(photo.photo_id);
      this.ratedCount += 1;
      await this.advance();
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        // server already has this pair; treat as acknowledged and move on
        this.acked.add(photo.photo_id);
        await this.advance();
      } else if (error instanceof ApiError) {
        this.setState({ kind: "failed", message: error.message });
      } else {
        this.setState({
          kind: "retry",
          photo,
          pendingScore: score,
          message: describe(error),
        });
      }
    }
  }

  /** Resubmit the score kept from a failed attempt. */
  async retry(): Promise<void> {
    const state = this.state;
    if (state.kind !== "retry") return;
    await this.submit(state.pendingScore);
  }
}

function describe(error: unknown): string {
  return error instanceof Error ? error.message : String(error);
}
