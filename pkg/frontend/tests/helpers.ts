import { readFileSync } from "node:fs";
import { join } from "node:path";

export function fixtureText(name: string): string {
  return readFileSync(join(process.cwd(), "fixtures", name), "utf-8");
}

export function fixtureJson(name: string): unknown {
  return JSON.parse(fixtureText(name));
}
