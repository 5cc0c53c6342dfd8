import { ApiClient } from "./api.js";
import { Store, WizardController } from "./state.js";
import { mount } from "./ui.js";

declare global {
  interface Window {
    VISQUAL_API?: string;
  }
}

const api = new ApiClient(window.VISQUAL_API ?? "");
const store = new Store();
const controller = new WizardController(store, api);

const root = document.getElementById("app");
if (!root) throw new Error("missing #app mount point");
mount(root, store, controller, api);
