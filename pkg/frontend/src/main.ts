// DOM wiring: rate / upload / stats screens over the state machine.

import { Api, ApiError } from "./api.js";
import { histogramBars } from "./histogram.js";
import { FlowState, MAX_SCORE, MIN_SCORE, RatingFlow } from "./rating.js";
import { raterToken } from "./session.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function show(panel: string): void {
  for (const name of ["rate", "upload", "stats"]) {
    el(`panel-${name}`).hidden = name !== panel;
    el(`tab-${name}`).classList.toggle("active", name === panel);
  }
}

export function boot(): void {
  const api = new Api("");
  const rater = raterToken(window.localStorage);
  el<HTMLElement>("rater-token").textContent = rater;

  const photo = el<HTMLImageElement>("photo");
  const status = el<HTMLElement>("rate-status");
  const buttons = el<HTMLElement>("score-buttons");
  const retryButton = el<HTMLButtonElement>("retry");
  const guidance = el<HTMLElement>("guidance");
  const counter = el<HTMLElement>("rated-count");

  const flow = new RatingFlow(api, rater, render);

  for (let score = MIN_SCORE; score <= MAX_SCORE; score++) {
    const button = document.createElement("button");
    button.textContent = String(score);
    button.dataset.score = String(score);
    button.addEventListener("click", () => void flow.submit(score));
    buttons.appendChild(button);
  }
  retryButton.addEventListener("click", () => void flow.retry());
  el("guidance-dismiss").addEventListener("click", () => {
    guidance.hidden = true;
  });

  document.addEventListener("keydown", (event) => {
    if (el("panel-rate").hidden) return;
    if (event.target instanceof HTMLInputElement) return;
    if (event.key >= "1" && event.key <= "9") void flow.submit(Number(event.key));
    if (event.key === "0") void flow.submit(10);
  });

  function render(state: FlowState): void {
    counter.textContent = String(flow.ratedCount);
    retryButton.hidden = state.kind !== "retry";
    buttons.hidden = state.kind !== "rating" && state.kind !== "retry";
    photo.hidden = !("photo" in state);
    switch (state.kind) {
      case "loading":
        status.textContent = "Loading the next photo...";
        break;
      case "rating":
        photo.src = state.photo.url;
        guidance.querySelector("p")!.textContent = state.photo.guidance;
        status.textContent = "Rate this photo on first impression (1 = worst, 10 = best).";
        break;
      case "submitting":
        status.textContent = `Submitting ${state.score}...`;
        break;
      case "retry":
        status.textContent = `Could not submit (${state.message}). Your score ${state.pendingScore} is kept.`;
        break;
      case "done":
        status.textContent = "All done - no more photos to rate. Thank you!";
        break;
      case "failed":
        status.textContent = `Something went wrong: ${state.message}`;
        break;
    }
    if (state.kind === "rating") void refreshStats();
  }

  // upload screen
  const uploadForm = el<HTMLFormElement>("upload-form");
  const uploadStatus = el<HTMLElement>("upload-status");
  uploadForm.addEventListener("submit", (event) => {
    event.preventDefault();
    const input = el<HTMLInputElement>("upload-file");
    const source = el<HTMLSelectElement>("upload-source").value;
    const file = input.files?.[0];
    if (!file) {
      uploadStatus.textContent = "Choose an image first.";
      return;
    }
    uploadStatus.textContent = "Uploading...";
    api
      .upload(file, source)
      .then((ack) => {
        uploadStatus.textContent = `Registered as ${ack.photo_id}. Thank you!`;
        input.value = "";
      })
      .catch((error) => {
        uploadStatus.textContent =
          error instanceof ApiError ? `Rejected: ${error.message}` : `Upload failed: ${error}`;
      });
  });

  // stats screen
  const bars = el<HTMLElement>("histogram");
  const statsLine = el<HTMLElement>("stats-line");

  async function refreshStats(): Promise<void> {
    try {
      const stats = await api.stats();
      statsLine.textContent =
        `${stats.photos} photos, ${stats.ratings} ratings, ${stats.labeled} labeled`;
      bars.replaceChildren();
      for (const bar of histogramBars(stats.histogram)) {
        const row = document.createElement("div");
        row.className = "bar-row";
        const label = document.createElement("span");
        label.className = "bar-label";
        label.textContent = String(bar.score);
        const track = document.createElement("div");
        track.className = "bar-track";
        const fill = document.createElement("div");
        fill.className = "bar-fill";
        fill.style.width = `${bar.fraction * 100}%`;
        fill.title = bar.percentLabel;
        track.appendChild(fill);
        const percent = document.createElement("span");
        percent.className = "bar-percent";
        percent.textContent = bar.percentLabel;
        row.append(label, track, percent);
        bars.appendChild(row);
      }
    } catch (error) {
      statsLine.textContent = `Stats unavailable: ${error}`;
    }
  }

  el("tab-rate").addEventListener("click", () => show("rate"));
  el("tab-upload").addEventListener("click", () => show("upload"));
  el("tab-stats").addEventListener("click", () => {
    show("stats");
    void refreshStats();
  });

  show("rate");
  void refreshStats();
  void flow.start();
}

document.addEventListener("DOMContentLoaded", boot);
