// Typed client for the rating-service API.

export interface NextPhoto {
  photo_id: string;
  url: string;
  ratings: number;
  guidance: string;
}

export interface RatingAck {
  photo_id: string;
  count: number;
  labeled: boolean;
}

export interface Stats {
  photos: number;
  ratings: number;
  labeled: number;
  histogram: number[];
}

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function errorMessage(response: Response): Promise<string> {
  try {
    const body = await response.json();
    if (body && typeof body.error === "string") return body.error;
    if (body && body.detail) return JSON.stringify(body.detail);
  } catch {
    // fall through to the generic message
  }
  return `request failed with status ${response.status}`;
}

export class Api {
  private readonly fetchFn: FetchLike;

  constructor(private readonly baseUrl = "", fetchFn?: FetchLike) {
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  photoUrl(photoId: string): string {
    return `${this.baseUrl}/api/photo/${photoId}`;
  }

  /** Next unrated photo for this rater, or null when none is eligible. */
  async next(rater: string): Promise<NextPhoto | null> {
    const response = await this.fetchFn(
      `${this.baseUrl}/api/next?rater=${encodeURIComponent(rater)}`
    );
    if (response.status === 204) return null;
    if (!response.ok) throw new ApiError(response.status, await errorMessage(response));
    return (await response.json()) as NextPhoto;
  }

  async submitRating(photoId: string, rater: string, score: number): Promise<RatingAck> {
    const response = await this.fetchFn(`${this.baseUrl}/api/rating`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ photo_id: photoId, rater, score }),
    });
    if (!response.ok) throw new ApiError(response.status, await errorMessage(response));
    return (await response.json()) as RatingAck;
  }

  async upload(file: Blob, source = "self"): Promise<{ photo_id: string }> {
    const form = new FormData();
    form.append("file", file, "upload.png");
    form.append("source", source);
    const response = await this.fetchFn(`${this.baseUrl}/api/upload`, {
      method: "POST",
      body: form,
    });
    if (!response.ok) throw new ApiError(response.status, await errorMessage(response));
    return (await response.json()) as { photo_id: string };
  }

  async stats(): Promise<Stats> {
    const response = await this.fetchFn(`${this.baseUrl}/api/stats`);
    if (!response.ok) throw new ApiError(response.status, await errorMessage(response));
    return (await response.json()) as Stats;
  }
}
