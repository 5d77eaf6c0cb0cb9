// Entry point: wire the view model to the DOM and make number entry
// keyboard-first (the player is operating the number filter on another
// device, so digits typed anywhere land in the input).

import { AdvisorClient } from "./api.js";
import { Handlers, render } from "./render.js";
import { AdvisorApp } from "./state.js";

function serviceBaseUrl(): string {
  const override = new URLSearchParams(window.location.search).get("api");
  return (override ?? window.location.origin).replace(/\/$/, "");
}

export function bootstrap(root: HTMLElement): AdvisorApp {
  const client = new AdvisorClient(serviceBaseUrl());
  const handlers: Handlers = {
    onStart: ({ variant, size, strategy }) => {
      void app.newGame(
        variant === "grid"
          ? { variant, m: size }
          : { variant, n: size, strategy },
      );
    },
    onDraw: (text) => void app.enterDraw(text),
    onCommit: (placement) => void app.commit(placement),
    onReset: () => app.reset(),
  };
  const app = new AdvisorApp(client, (view) => render(root, view, handlers));
  app.reset();

  document.addEventListener("keydown", (event) => {
    if (app.view.phase !== "playing") return;
    const input = document.getElementById("draw-input") as HTMLInputElement | null;
    if (!input || document.activeElement === input) return;
    if (/^\d$/.test(event.key)) {
      input.focus();
    }
  });
  return app;
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  bootstrap(document.getElementById("app")!);
}
