import { describe, expect, it } from "vitest";

import { ApiError, NextPhoto, RatingAck } from "../src/api.js";
import { FlowState, RatingFlow, isValidScore } from "../src/rating.js";

function photo(id: string): NextPhoto {
  return { photo_id: id, url: `/api/photo/${id}`, ratings: 0, guidance: "g" };
}

/** In-memory service double; `failNext` makes one submission drop. */
class FakeApi {
  queue: NextPhoto[];
  submitted: Array<{ photoId: string; rater: string; score: number }> = [];
  failNext: Error | null = null;
  private seen = new Set<string>();

  constructor(ids: string[]) {
    this.queue = ids.map(photo);
  }

  async next(_rater: string): Promise<NextPhoto | null> {
    return this.queue.length ? this.queue[0] : null;
  }

  async submitRating(photoId: string, rater: string, score: number): Promise<RatingAck> {
    if (this.failNext) {
      const error = this.failNext;
      this.failNext = null;
      throw error;
    }
    if (this.seen.has(`${photoId}/${rater}`)) {
      throw new ApiError(409, "already rated");
    }
    this.seen.add(`${photoId}/${rater}`);
    this.submitted.push({ photoId, rater, score });
    this.queue = this.queue.filter((p) => p.photo_id !== photoId);
    return { photo_id: photoId, count: 1, labeled: false };
  }
}

describe("score validation", () => {
  it("accepts exactly the integers 1..10", () => {
    for (let s = 1; s <= 10; s++) expect(isValidScore(s)).toBe(true);
    for (const bad of [0, 11, -1, 5.5, NaN, Infinity]) {
      expect(isValidScore(bad)).toBe(false);
    }
  });

  it("never sends an out-of-range score to the API", async () => {
    const api = new FakeApi(["p1"]);
    const flow = new RatingFlow(api, "rater");
    await flow.start();
    for (const bad of [0, 11, 5.5]) {
      await expect(flow.submit(bad)).rejects.toThrow(RangeError);
    }
    expect(api.submitted).toHaveLength(0);
  });
});

describe("rating flow", () => {
  it("walks photos until the queue is exhausted", async () => {
    const api = new FakeApi(["p1", "p2", "p3"]);
    const states: FlowState["kind"][] = [];
    const flow = new RatingFlow(api, "rater", (s) => states.push(s.kind));
    await flow.start();
    expect(flow.getState().kind).toBe("rating");
    await flow.submit(7);
    await flow.submit(3);
    await flow.submit(10);
    expect(flow.getState().kind).toBe("done");
    expect(flow.ratedCount).toBe(3);
    expect(api.submitted.map((s) => s.score)).toEqual([7, 3, 10]);
    expect(states).toContain("submitting");
  });

  it("posts the documented body fields", async () => {
    const api = new FakeApi(["p9"]);
    const flow = new RatingFlow(api, "token-abc");
    await flow.start();
    await flow.submit(7);
    expect(api.submitted[0]).toEqual({ photoId: "p9", rater: "token-abc", score: 7 });
  });

  it("ignores duplicate submissions after an ack", async () => {
    const api = new FakeApi(["p1"]);
    // keep p1 on screen after the ack so a stale double-click is possible
    api.queue.push(photo("p1"));
    const flow = new RatingFlow(api, "rater");
    await flow.start();
    await flow.submit(5);
    await flow.submit(9); // same photo still showing; must be a no-op
    expect(api.submitted).toHaveLength(1);
  });

  it("keeps the pending score through a network failure", async () => {
    const api = new FakeApi(["p1", "p2"]);
    const flow = new RatingFlow(api, "rater");
    await flow.start();
    api.failNext = new TypeError("fetch failed");
    await flow.submit(8);
    const state = flow.getState();
    expect(state.kind).toBe("retry");
    if (state.kind === "retry") {
      expect(state.pendingScore).toBe(8);
      expect(state.photo.photo_id).toBe("p1");
    }
    await flow.retry();
    expect(api.submitted).toEqual([{ photoId: "p1", rater: "rater", score: 8 }]);
    expect(flow.getState().kind).toBe("rating");
  });

  it("advances past a server-side duplicate conflict", async () => {
    const api = new FakeApi(["p1", "p2"]);
    const flow = new RatingFlow(api, "rater");
    await flow.start();
    api.failNext = new ApiError(409, "already rated");
    await flow.submit(4);
    expect(flow.getState().kind).toBe("rating");
    expect(flow.ratedCount).toBe(0);
  });

  it("shows done immediately on an empty queue", async () => {
    const flow = new RatingFlow(new FakeApi([]), "rater");
    await flow.start();
    expect(flow.getState().kind).toBe("done");
  });

  it("surfaces a failed start", async () => {
    const api = new FakeApi(["p1"]);
    api.next = async () => {
      throw new TypeError("connection refused");
    };
    const flow = new RatingFlow(api, "rater");
    await flow.start();
    expect(flow.getState().kind).toBe("failed");
  });
});
