// Anonymous rater identity, generated once and kept in local storage so a
// reload continues the same session.

export interface KeyValueStore {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
}

const TOKEN_KEY = "groupaes.rater";

export function raterToken(store: KeyValueStore, random: () => number = Math.random): string {
  const existing = store.getItem(TOKEN_KEY);
  if (existing) return existing;
  const chunk = () => random().toString(36).slice(2, 10);
  const token = `r-${chunk()}${chunk()}`;
  store.setItem(TOKEN_KEY, token);
  return token;
}
