// DOM rendering. Probabilities carry their exact service value in data
// attributes (data-win-prob and friends) so parity with the API is
// mechanically checkable; the visible text is only a formatting of it.

import {
  GridStateDoc,
  ListStateDoc,
  Recommendation,
  SessionDoc,
  isSlotRecommendation,
} from "./api.js";
import { UiSessionView } from "./state.js";

export interface Handlers {
  onStart(form: {
    variant: "list" | "grid";
    size: number;
    strategy: "rt" | "es";
  }): void;
  onDraw(text: string): void;
  onCommit(placement: { slot?: number; cell?: [number, number] }): void;
  onReset(): void;
}

export function formatProbability(p: number): string {
  if (p === 0) return "0";
  if (p >= 0.01) return p.toFixed(4);
  return p.toExponential(3);
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function probabilitySpan(className: string, attr: string, value: number): HTMLSpanElement {
  const span = el("span", className, formatProbability(value));
  span.setAttribute(attr, String(value));
  return span;
}

function renderSetup(root: HTMLElement, handlers: Handlers): void {
  const panel = el("section", "setup-panel");
  panel.id = "setup";
  const title = el("h1", undefined, "blindseq advisor");
  const form = el("form");
  form.innerHTML = `
    <label>variant
      <select name="variant">
        <option value="list" selected>list</option>
        <option value="grid">grid</option>
      </select>
    </label>
    <label>size <input name="size" type="number" value="20" min="1" max="64"></label>
    <label>strategy
      <select name="strategy">
        <option value="rt" selected>risk tolerant</option>
        <option value="es">equal spacing</option>
      </select>
    </label>
    <button type="submit" id="start">start game</button>
  `;
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const data = new FormData(form);
    handlers.onStart({
      variant: data.get("variant") === "grid" ? "grid" : "list",
      size: Number(data.get("size")),
      strategy: data.get("strategy") === "es" ? "es" : "rt",
    });
  });
  panel.append(title, form);
  root.append(panel);
}

function renderTicks(boundaries: number[]): HTMLElement {
  const strip = el("div", "tick-strip");
  strip.title = "strategy decision boundaries for the full list";
  for (const alpha of boundaries.slice(1, -1)) {
    const tick = el("span", "tick");
    tick.style.left = `${(alpha * 100).toFixed(3)}%`;
    tick.dataset.alpha = String(alpha);
    strip.append(tick);
  }
  return strip;
}

function renderListBoard(
  state: ListStateDoc,
  lastDraw: UiSessionView["lastDraw"],
  handlers: Handlers,
): HTMLElement {
  const board = el("div", "board list-board");
  const bySlot = new Map<number, Recommendation>();
  if (lastDraw && !lastDraw.eliminated) {
    for (const rec of lastDraw.recommendations) {
      if (isSlotRecommendation(rec)) bySlot.set(rec.slot, rec);
    }
  }
  const list = el("ol", "slots");
  state.slots.forEach((value, index) => {
    const slot = index + 1;
    const item = el("li", "slot");
    item.dataset.slot = String(slot);
    const label = el("span", "slot-number", String(slot));
    item.append(label);
    if (value !== null) {
      item.classList.add("filled");
      item.append(el("span", "slot-value", String(Math.round(value * 1000 - 0.5))));
    } else {
      const rec = bySlot.get(slot);
      if (rec && isSlotRecommendation(rec)) {
        const button = el("button", "commit");
        button.type = "button";
        button.dataset.slot = String(slot);
        button.dataset.rank = String(rec.rank);
        if (rec.rank === 1) {
          button.classList.add("best");
          item.classList.add("recommended");
        }
        button.append(
          probabilitySpan("win-prob", "data-win-prob", rec.win_prob),
          el("span", "sep", " / "),
          probabilitySpan("correct-so-far", "data-correct-so-far", rec.correct_so_far),
        );
        button.addEventListener("click", () => handlers.onCommit({ slot }));
        item.append(button);
      } else {
        item.append(el("span", "slot-empty", "·"));
      }
    }
    list.append(item);
  });
  board.append(list);
  return board;
}

function renderGridBoard(
  state: GridStateDoc,
  lastDraw: UiSessionView["lastDraw"],
  handlers: Handlers,
): HTMLElement {
  const board = el("div", "board grid-board");
  const byCell = new Map<string, Recommendation>();
  if (lastDraw && !lastDraw.eliminated) {
    for (const rec of lastDraw.recommendations) {
      if (!isSlotRecommendation(rec)) byCell.set(rec.cell.join(","), rec);
    }
  }
  const table = el("table", "grid");
  for (let i = 1; i <= state.m; i += 1) {
    const row = el("tr");
    for (let j = 1; j <= state.m; j += 1) {
      const cellValue = state.cells[i - 1]?.[j - 1] ?? null;
      const cell = el("td", "cell");
      cell.dataset.cell = `${i},${j}`;
      if (cellValue !== null) {
        cell.classList.add("filled");
        cell.textContent = String(Math.round(cellValue * 1000 - 0.5));
      } else {
        const rec = byCell.get(`${i},${j}`);
        if (rec && !isSlotRecommendation(rec)) {
          const button = el("button", "commit");
          button.type = "button";
          button.dataset.cell = `${i},${j}`;
          button.dataset.rank = String(rec.rank);
          if (rec.rank === 1) button.classList.add("best");
          button.append(probabilitySpan("cell-prob", "data-probability", rec.probability));
          button.addEventListener("click", () => handlers.onCommit({ cell: [i, j] }));
          cell.append(button);
        }
      }
      row.append(cell);
    }
    table.append(row);
  }
  board.append(table);
  return board;
}

function renderStats(session: SessionDoc): HTMLElement {
  const stats = el("div", "stats");
  stats.append(el("span", "draws", `draws: ${session.draws_submitted}`));
  if (session.win_prob !== null) {
    const label = el("span", "running", "win odds: ");
    label.append(probabilitySpan("win-prob", "data-win-prob", session.win_prob));
    stats.append(label);
  }
  if (session.correct_so_far !== null) {
    const label = el("span", "running", "correct so far: ");
    label.append(
      probabilitySpan("correct-so-far", "data-correct-so-far", session.correct_so_far),
    );
    stats.append(label);
  }
  return stats;
}

function renderEntry(view: UiSessionView, handlers: Handlers): HTMLElement {
  const entry = el("div", "entry");
  const input = el("input");
  input.id = "draw-input";
  input.type = "text";
  input.autocomplete = "off";
  input.placeholder = "type the generated number, press Enter";
  input.addEventListener("keydown", (event) => {
    if (event.key === "Enter") {
      event.preventDefault();
      handlers.onDraw(input.value);
      input.value = "";
    }
  });
  entry.append(input);
  if (view.inputError) {
    entry.append(el("span", "input-error", view.inputError));
  }
  return entry;
}

function renderTerminal(view: UiSessionView, handlers: Handlers): HTMLElement {
  const session = view.session!;
  const screen = el("section", "terminal");
  if (view.phase === "won") {
    screen.classList.add("victory");
    screen.append(el("h1", undefined, "you win!"));
    const draws = el("p", "total-draws", `total draws used: ${session.draws_submitted}`);
    draws.dataset.draws = String(session.draws_submitted);
    screen.append(draws);
  } else {
    screen.classList.add("loss");
    screen.append(el("h1", undefined, "eliminated"));
    const turn = el("p", "elimination-turn", `no slot fits — elimination on draw ${session.elimination_turn}`);
    turn.dataset.turn = String(session.elimination_turn);
    screen.append(turn);
  }
  const again = el("button", "again", "new game");
  again.type = "button";
  again.addEventListener("click", () => handlers.onReset());
  screen.append(again);
  return screen;
}

export function render(root: HTMLElement, view: UiSessionView, handlers: Handlers): void {
  root.textContent = "";
  if (view.banner) {
    root.append(el("div", "banner", view.banner));
  }
  if (view.phase === "setup" || view.session === null) {
    renderSetup(root, handlers);
    return;
  }
  const session = view.session;
  const game = el("section", "game");
  game.dataset.status = session.status;

  if (view.phase === "won" || view.phase === "eliminated") {
    game.append(renderTerminal(view, handlers));
    // the final board stays visible under the banner screen
  }
  if (session.variant === "list") {
    const state = session.state as ListStateDoc;
    if (view.boundaries && view.boundaries.length > 0) {
      game.append(renderTicks(view.boundaries));
    }
    game.append(renderListBoard(state, view.lastDraw, handlers));
  } else {
    game.append(renderGridBoard(session.state as GridStateDoc, view.lastDraw, handlers));
  }
  if (view.phase === "playing") {
    game.append(renderEntry(view, handlers));
  }
  game.append(renderStats(session));
  root.append(game);
}
